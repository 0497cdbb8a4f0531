"""HTTP session service: routes, status codes, transcript consistency."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from ocycle.board import OrientationBoard
from ocycle.engine import Transcript, referee_check
from ocycle.service import make_server


@pytest.fixture(scope="module")
def server():
    srv = make_server(0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()


def req(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    r = urllib.request.Request(
        base + path, data=data, method=method,
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(r) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def new_game(base, **cfg):
    payload = {"n": 24, "b": 22, "rules": "monotone", "obreaker": "alpha-monotone"}
    payload.update(cfg)
    return req(base, "POST", "/games", payload)


class TestCreate:
    def test_created_with_empty_board(self, server):
        code, out = new_game(server)
        assert code == 201
        assert out["state"]["board"]["arcs"] == []
        assert out["state"]["turn"] == "maker"
        assert out["state"]["rounds"] == 0

    def test_invalid_configs(self, server):
        assert new_game(server, n=0)[0] == 400
        assert new_game(server, b=0)[0] == 400
        assert new_game(server, n=3, b=5)[0] == 400
        assert new_game(server, obreaker="alpha-monotone", rules="strict")[0] == 400

    def test_unknown_game_404(self, server):
        assert req(server, "GET", "/games/deadbeef")[0] == 404
        assert req(server, "POST", "/games/deadbeef/move",
                   {"tail": 0, "head": 1})[0] == 404


class TestMoves:
    def test_first_move_matches_engine_trace(self, server):
        _, out = new_game(server)
        gid = out["id"]
        code, out = req(server, "POST", f"/games/{gid}/move", {"tail": 1, "head": 2})
        assert code == 200
        assert out["breakerArcs"] == [[1, 3], [0, 3]]
        assert out["state"]["rounds"] == 1
        assert out["terminal"] is None

    def test_directed_pair_conflicts(self, server):
        _, out = new_game(server)
        gid = out["id"]
        req(server, "POST", f"/games/{gid}/move", {"tail": 1, "head": 2})
        assert req(server, "POST", f"/games/{gid}/move",
                   {"tail": 1, "head": 2})[0] == 409
        assert req(server, "POST", f"/games/{gid}/move",
                   {"tail": 2, "head": 1})[0] == 409

    def test_closing_move_wins_without_reply(self, server):
        _, out = new_game(server, n=8, b=2, obreaker="naive")
        gid = out["id"]
        for tail, head in [(2, 3), (4, 5), (6, 7), (3, 4)]:
            code, out = req(server, "POST", f"/games/{gid}/move",
                            {"tail": tail, "head": head})
            assert code == 200
        threats = [tuple(a) for a in out["state"]["threats"]]
        assert threats, "the maker should have an open threat"
        tail, head = threats[0]
        code, out = req(server, "POST", f"/games/{gid}/move",
                        {"tail": tail, "head": head})
        assert code == 200
        assert out["breakerArcs"] == []
        assert out["terminal"] == {"winner": "OMaker", "terminal": "CycleClosed"}
        assert req(server, "POST", f"/games/{gid}/move",
                   {"tail": 0, "head": 1})[0] == 410


class TestStateViews:
    def test_threats_are_served(self, server):
        _, out = new_game(server, n=10, b=1, obreaker="naive")
        gid = out["id"]
        req(server, "POST", f"/games/{gid}/move", {"tail": 5, "head": 6})
        _, out = req(server, "POST", f"/games/{gid}/move", {"tail": 6, "head": 7})
        state = out["state"]
        board = OrientationBoard.from_json(state["board"])
        assert sorted(tuple(a) for a in state["threats"]) == sorted(
            board.closing_arcs()
        )

    def test_state_is_replayable_from_transcript(self, server):
        _, out = new_game(server)
        gid = out["id"]
        for tail, head in [(1, 2), (5, 6), (8, 9)]:
            req(server, "POST", f"/games/{gid}/move", {"tail": tail, "head": head})
        _, state = req(server, "GET", f"/games/{gid}")
        _, tr = req(server, "GET", f"/games/{gid}/transcript")
        board = OrientationBoard(state["n"])
        for rnd in tr["rounds"]:
            board.direct(*rnd["maker"])
            for arc in rnd["breaker"]:
                board.direct(*arc)
        assert board.to_json() == state["board"]

    def test_persist_dir_stores_finished_games(self, tmp_path):
        import os
        from ocycle.service import make_server

        srv = make_server(0, persist_dir=str(tmp_path))
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        base = f"http://127.0.0.1:{srv.server_address[1]}"
        try:
            _, out = new_game(base, n=3, b=1, obreaker="trivial")
            gid = out["id"]
            state = out["state"]
            while state["terminal"] is None:
                board = OrientationBoard.from_json(state["board"])
                arc = next(board.available_arcs())
                _, out = req(base, "POST", f"/games/{gid}/move",
                             {"tail": arc[0], "head": arc[1]})
                state = out["state"]
            stored = json.loads((tmp_path / f"{gid}.json").read_text())
            assert referee_check(Transcript.from_json(stored)) == []
        finally:
            srv.shutdown()

    def test_finished_transcript_passes_referee(self, server):
        _, out = new_game(server, n=6, b=4, obreaker="trivial")
        gid = out["id"]
        state = out["state"]
        while state["terminal"] is None:
            board = OrientationBoard.from_json(state["board"])
            arc = next(board.available_arcs())
            code, out = req(server, "POST", f"/games/{gid}/move",
                            {"tail": arc[0], "head": arc[1]})
            assert code == 200
            state = out["state"]
        _, tr = req(server, "GET", f"/games/{gid}/transcript")
        assert referee_check(Transcript.from_json(tr)) == []
