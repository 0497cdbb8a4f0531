"""Adversaries: threat tracking, threat maximisation, the sparring breaker."""

import random

from ocycle.board import OrientationBoard
from ocycle.engine import GameConfig, play
from ocycle.omaker import CloseOrElse, LongPath, MaxThreats, RandomArc, make_omaker, naive_obreaker
from ocycle.threats import ClosureMatrix, ThreatIndex, count_closing_after


def scrambled_board(n, seed, steps=None, acyclic=True):
    rng = random.Random(seed)
    b = OrientationBoard(n)
    limit = steps if steps is not None else rng.randrange(0, b.n_pairs + 1)
    for _ in range(limit):
        if b.is_full():
            break
        u, v = b.undirected_pair_at(rng.randrange(b.undirected_count))
        if rng.random() < 0.5:
            u, v = v, u
        child = b.copy()
        child.direct(u, v)
        if acyclic and child.has_cycle():
            continue
        b.direct(u, v)
    return b


class TestThreatIndex:
    def test_matches_brute_force(self):
        for seed in range(200):
            n = 3 + seed % 5
            b = OrientationBoard(n)
            ti = ThreatIndex(b)
            rng = random.Random(seed)
            while not b.is_full():
                u, v = b.undirected_pair_at(rng.randrange(b.undirected_count))
                if rng.random() < 0.5:
                    u, v = v, u
                child = b.copy()
                child.direct(u, v)
                if child.has_cycle():
                    break
                b.direct(u, v)
                ti.sync()
                brute = {
                    (a, c) if a < c else (c, a) for a, c in b.closing_arcs()
                }
                assert bool(ti.closable) == bool(brute)
                assert ti.closable <= brute

    def test_triangle_closing_arcs_close(self):
        for seed in range(60):
            b = scrambled_board(6, seed)
            if b.has_cycle():
                continue
            ti = ThreatIndex(b)
            for arc in ti.triangle_closing_arcs():
                child = b.copy()
                child.direct(*arc)
                assert child.has_cycle()


class TestMaxThreats:
    def test_counts_match_brute_force(self):
        for seed in range(80):
            b = scrambled_board(6, seed, acyclic=False)
            counts = ClosureMatrix(b).threat_counts()
            for u, v in b.undirected_pairs():
                for arc in ((u, v), (v, u)):
                    assert int(counts[arc[0], arc[1]]) == count_closing_after(b, arc)

    def test_joining_two_paths_wins(self):
        b = OrientationBoard(8)
        for a in [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)]:
            b.direct(*a)
        assert ClosureMatrix(b).best_arc() == (3, 4)

    def test_strategy_emits_available_arcs(self):
        b = OrientationBoard(7)
        strat = MaxThreats()
        strat.reset(b)
        for _ in range(10):
            arc = strat.move(b)
            assert b.is_available(*arc)
            b.direct(*arc)


class TestCloseOrElse:
    def test_closes_the_unique_threat(self):
        b = OrientationBoard(4)
        b.direct(1, 2)
        b.direct(2, 3)
        strat = CloseOrElse(RandomArc(0))
        strat.reset(b)
        assert strat.move(b) == (3, 1)

    def test_delegates_when_nothing_closes(self):
        b = OrientationBoard(5)
        strat = CloseOrElse(LongPath())
        strat.reset(b)
        assert strat.move(b) == (0, 1)

    def test_soundness_closing_move_wins(self):
        tr = play(
            GameConfig(n=12, b=3, rules="monotone", obreaker="naive",
                       omaker="close-or-longpath", seed=0)
        )
        assert tr.winner == "OMaker" and tr.terminal == "CycleClosed"


class TestLongPath:
    def test_first_moves(self):
        b = OrientationBoard(6)
        strat = LongPath()
        strat.reset(b)
        assert strat.move(b) == (0, 1)
        b.direct(0, 1)
        b.direct(3, 4)  # breaker noise elsewhere
        assert strat.move(b) == (1, 2)

    def test_never_emits_unavailable(self):
        for seed in range(5):
            tr = play(
                GameConfig(n=15, b=14, rules="monotone", obreaker="alpha-monotone",
                           omaker="close-or-longpath", seed=seed)
            )
            assert tr.terminal != "Forfeit" or tr.meta.get("fault") != "OMaker"


class TestNaiveBreaker:
    def test_blocks_the_path_threat(self):
        b = OrientationBoard(5)
        b.direct(0, 1)
        b.direct(1, 2)
        arcs = naive_obreaker(b, (1, 2), 3)
        assert arcs[0] == (0, 2)

    def test_budget_respected(self):
        b = OrientationBoard(10)
        for i in range(6):
            if i < 5:
                b.direct(i, i + 1)
        blocked = naive_obreaker(b, (4, 5), 2)
        assert len(blocked) <= 2

    def test_loses_the_overload_game(self):
        tr = play(
            GameConfig(n=20, b=8, rules="monotone", obreaker="naive",
                       omaker="close-or-longpath", seed=0)
        )
        assert tr.winner == "OMaker"

    def test_strict_padding(self):
        b = OrientationBoard(6)
        b.direct(0, 1)
        arcs = naive_obreaker(b, (0, 1), 4, strict=True)
        assert len(arcs) == 4


class TestFactory:
    def test_names(self):
        for name in ("close-or-random", "close-or-longpath", "random", "max-threats"):
            strat = make_omaker(name, 3)
            b = OrientationBoard(6)
            strat.reset(b)
            arc = strat.move(b)
            assert b.is_available(*arc)
