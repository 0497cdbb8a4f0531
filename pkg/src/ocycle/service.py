"""HTTP+JSON session server: a human plays OMaker against any OBreaker.

Sessions live in memory behind per-session locks; every served state is a
pure function of the moves played so far, and the stored transcript prefix
replays to the live board.  Optional ``persist_dir`` appends finished
transcripts to disk.  CORS is wide open so the browser client can run
from any origin.

Routes:
    POST /games                     create a session (201)
    POST /games/{id}/move           human directs one arc, engine replies
    GET  /games/{id}                current state
    GET  /games/{id}/transcript     transcript so far
    GET  /healthz                   liveness probe
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .board import OBREAKER, OMAKER, ForfeitError, OrientationBoard
from .engine import (
    CYCLE_CLOSED,
    FORFEIT,
    GameConfig,
    TRANSITIVE,
    Transcript,
    _board_hash,
    make_obreaker,
)
from .strict import InvariantBreach, StructureExhausted
from .threats import ThreatIndex


class Session:
    def __init__(self, config: GameConfig):
        self.id = uuid.uuid4().hex[:12]
        self.config = config
        self.board = OrientationBoard(config.n)
        self.breaker = make_obreaker(config.obreaker, config.n, config.b, config.rules)
        self.tracker = ThreatIndex(self.board)
        self.rounds: list[dict] = []
        self.crc = 0
        self.winner: str | None = None
        self.terminal: str | None = None
        self.last_reply: list = []
        self.lock = threading.Lock()

    # -- views -------------------------------------------------------------

    def state(self) -> dict:
        threats = sorted(self.board.closing_arcs()) if self.terminal is None else []
        return {
            "id": self.id,
            "n": self.config.n,
            "b": self.config.b,
            "rules": self.config.rules,
            "obreaker": self.config.obreaker,
            "board": self.board.to_json(),
            "arcs": [[t, h, actor] for t, h, actor in self.board.log],
            "turn": "maker" if self.terminal is None else "done",
            "threats": [list(a) for a in threats],
            "partitions": self.breaker.summary(),
            "lastReply": [list(a) for a in self.last_reply],
            "rounds": len(self.rounds),
            "terminal": self._terminal_view(),
        }

    def _terminal_view(self):
        if self.terminal is None:
            return None
        return {"winner": self.winner, "terminal": self.terminal}

    def transcript(self) -> Transcript:
        return Transcript(
            config=self.config,
            rounds=list(self.rounds),
            winner=self.winner,
            terminal=self.terminal,
            final=self.board.to_json() if self.terminal else None,
            meta={"summary": self.breaker.summary()},
        )

    # -- engine ------------------------------------------------------------

    def _record(self, maker_arc, reply) -> None:
        self.crc = _board_hash(self.crc, [tuple(maker_arc)] + [tuple(a) for a in reply])
        self.rounds.append(
            {
                "maker": list(maker_arc),
                "breaker": [list(a) for a in reply],
                "hash": f"{self.crc:08x}",
            }
        )

    def move(self, tail: int, head: int) -> dict:
        """Apply the human's arc and the engine's reply; raises ApiError."""
        if self.terminal is not None:
            raise ApiError(410, "game over")
        if not (0 <= tail < self.config.n and 0 <= head < self.config.n) or tail == head:
            raise ApiError(400, f"invalid arc ({tail},{head})")
        if not self.board.pair_undirected(tail, head):
            raise ApiError(409, f"pair ({tail},{head}) already directed")
        closes = self.tracker.any_closable() and self.board.reaches(head, tail)
        self.board.direct(tail, head, OMAKER)
        if closes:
            self._record((tail, head), [])
            self.winner, self.terminal = OMAKER, CYCLE_CLOSED
            self.last_reply = []
            return {"breakerArcs": []}
        if self.board.is_full():
            self._record((tail, head), [])
            self._final_verdict()
            self.last_reply = []
            return {"breakerArcs": []}
        try:
            reply = self.breaker.respond(self.board, (tail, head))
        except (ForfeitError, StructureExhausted, InvariantBreach) as exc:
            self._record((tail, head), [])
            self.winner, self.terminal = OMAKER, FORFEIT
            self.last_reply = []
            return {"breakerArcs": [], "fault": str(exc)}
        self._record((tail, head), reply)
        self.last_reply = list(reply)
        if self.tracker.sync() and self.board.has_cycle():
            self.winner, self.terminal = OMAKER, CYCLE_CLOSED
        elif self.board.is_full():
            self._final_verdict()
        return {"breakerArcs": [list(a) for a in reply]}

    def _final_verdict(self) -> None:
        if self.board.is_transitive_tournament():
            self.winner, self.terminal = OBREAKER, TRANSITIVE
        else:
            self.winner, self.terminal = OMAKER, CYCLE_CLOSED


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class GameServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, persist_dir: str | None = None):
        super().__init__(address, _Handler)
        self.sessions: dict[str, Session] = {}
        self.registry_lock = threading.Lock()
        self.persist_dir = persist_dir

    def persist(self, session: Session) -> None:
        if not self.persist_dir or session.terminal is None:
            return
        os.makedirs(self.persist_dir, exist_ok=True)
        path = os.path.join(self.persist_dir, f"{session.id}.json")
        with open(path, "w") as fh:
            json.dump(session.transcript().to_json(), fh)


class _Handler(BaseHTTPRequestHandler):
    server: GameServer

    def log_message(self, fmt, *args):  # quiet
        pass

    # -- plumbing ----------------------------------------------------------

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            return json.loads(self.rfile.read(length))
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"bad JSON body: {exc}")

    def _session(self, sid: str) -> Session:
        session = self.server.sessions.get(sid)
        if session is None:
            raise ApiError(404, f"unknown game {sid}")
        return session

    # -- routes ------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        try:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if parts == ["healthz"]:
                self._send(200, {"ok": True})
            elif len(parts) == 2 and parts[0] == "games":
                session = self._session(parts[1])
                with session.lock:
                    self._send(200, session.state())
            elif len(parts) == 3 and parts[0] == "games" and parts[2] == "transcript":
                session = self._session(parts[1])
                with session.lock:
                    self._send(200, session.transcript().to_json())
            else:
                raise ApiError(404, f"no route {self.path}")
        except ApiError as exc:
            self._send(exc.status, {"error": exc.message})

    def do_POST(self):
        try:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if parts == ["games"]:
                self._create_game()
            elif len(parts) == 3 and parts[0] == "games" and parts[2] == "move":
                self._move(parts[1])
            else:
                raise ApiError(404, f"no route {self.path}")
        except ApiError as exc:
            self._send(exc.status, {"error": exc.message})

    def _create_game(self):
        body = self._body()
        try:
            cfg = GameConfig(
                n=int(body.get("n", 0)),
                b=int(body.get("b", 0)),
                rules=body.get("rules", "monotone"),
                obreaker=body.get("obreaker", "alpha-monotone"),
                omaker="human",
            )
            cfg.validate()
        except (TypeError, ValueError) as exc:
            raise ApiError(400, f"invalid config: {exc}")
        session = Session(cfg)
        with self.server.registry_lock:
            self.server.sessions[session.id] = session
        self._send(201, {"id": session.id, "state": session.state()})

    def _move(self, sid: str):
        session = self._session(sid)
        body = self._body()
        try:
            tail, head = int(body["tail"]), int(body["head"])
        except (KeyError, TypeError, ValueError):
            raise ApiError(400, "move body needs integer tail and head")
        with session.lock:
            result = session.move(tail, head)
            result["state"] = session.state()
            result["terminal"] = session._terminal_view()
            if session.terminal is not None:
                self.server.persist(session)
        self._send(200, result)


def make_server(port: int = 0, persist_dir: str | None = None) -> GameServer:
    return GameServer(("127.0.0.1", port), persist_dir=persist_dir)


def run_server(port: int = 8000, persist_dir: str | None = None) -> None:
    server = make_server(port, persist_dir)
    host, actual_port = server.server_address
    print(f"ocycle service listening on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
