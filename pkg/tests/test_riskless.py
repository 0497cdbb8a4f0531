"""Riskless / protected validators, duality, size bounds and the
transition threshold."""

import random

import pytest

from ocycle.board import OMAKER, OrientationBoard
from ocycle.riskless import (
    ProtectedState,
    RisklessState,
    TransitionFailed,
    forcing_holds,
    protected_is_acyclic,
    size_bounds,
    smallest_transition_n,
    transition,
    verify_protected,
    verify_riskless,
)
from ocycle.strict import new_strict_state, respond_strict


def play_strict_prefix(n, b, seed, rounds=None):
    """Strict game against a random OMaker, stopped after some rounds."""
    rng = random.Random(seed)
    board = OrientationBoard(n)
    st = new_strict_state(n, b)
    played = 0
    while not board.is_full() and (rounds is None or played < rounds):
        u, v = board.undirected_pair_at(rng.randrange(board.undirected_count))
        if rng.random() < 0.5:
            u, v = v, u
        board.direct(u, v, OMAKER)
        if board.is_full():
            break
        _, st = respond_strict(st, board, (u, v), b, n)
        played += 1
    return board, st


class TestRisklessValidator:
    def test_empty_state_is_riskless_rank_zero(self):
        assert verify_riskless(OrientationBoard(40), RisklessState()) == []

    def test_r1_size_violation(self):
        st = RisklessState(A_0=[0, 1], B_0=[])
        out = verify_riskless(OrientationBoard(10), st)
        assert any(item.startswith("R1") for item in out)

    def test_r4_arc_outside_classes(self):
        board = OrientationBoard(10)
        board.direct(0, 5)  # buffer member into the untouched zone
        st = RisklessState(A_0=[0], B_0=[1])
        board.direct(0, 1)  # keep the biclique complete
        out = verify_riskless(board, st)
        assert any(item.startswith("R4") for item in out)

    def test_simulated_rounds_stay_clean(self):
        n, b = 200, 190
        board, st = play_strict_prefix(n, b, seed=0, rounds=4)
        assert st.phase == "I"
        assert verify_riskless(board, st.riskless) == []

    def test_riskless_board_has_no_closing_arc(self):
        n, b = 200, 190
        for rounds in (2, 5):
            board, st = play_strict_prefix(n, b, seed=4, rounds=rounds)
            assert board.closing_arcs() == set()


class TestValidatorSharpness:
    """Tampered real-game states must trip the matching property."""

    def _riskless_game(self):
        board, st = play_strict_prefix(200, 190, seed=11, rounds=5)
        return board, st.riskless

    def _protected_game(self):
        board, st = play_strict_prefix(200, 190, seed=11, rounds=11)
        return board, st.protected

    def test_r2_enumeration_order_matters(self):
        board, st = self._riskless_game()
        st.A_S = list(reversed(st.A_S))
        out = verify_riskless(board, st)
        assert any(item.startswith("R2.1") for item in out)

    def test_r2_down_set_breach(self):
        board, st = self._riskless_game()
        # an arc from the bottom centre into an untouched vertex that the
        # centres above skipped breaks the nesting
        a_mask = sum(1 << v for v in st.a_members())
        b_mask = sum(1 << v for v in st.b_members())
        bottom = st.A_S[-1]
        for z in range(board.n):
            zb = 1 << z
            if not (a_mask & zb) and not (b_mask & zb) and board.is_available(bottom, z):
                if not board.has_arc(st.A_S[0], z):
                    board.direct(bottom, z)
                    break
        out = verify_riskless(board, st)
        assert any(item.startswith(("R2.2", "R3.1", "R4")) for item in out)

    def test_r3_star_budget_breach(self):
        board, st = self._riskless_game()
        top = st.A_S[0]
        added = 0
        for z in st.A_0:
            if board.is_available(top, z):
                board.direct(top, z)
                added += 1
        out = verify_riskless(board, st)
        assert added == 0 or any(item.startswith("R3.1") for item in out)

    def test_p2_dead_vertex_must_dominate(self):
        board, st = self._protected_game()
        # push a buffer vertex into the dead class without its arcs
        victim = st.A_0[0]
        st.A_D.append(victim)
        st.A_0 = [z for z in st.A_0 if z != victim]
        out = verify_protected(board, st)
        assert any(item.startswith("P2") for item in out)

    def test_p4_enumeration_tamper(self):
        board, st = self._protected_game()
        if len(st.A_S) >= 2:
            st.A_S = list(reversed(st.A_S))
            out = verify_protected(board, st)
            assert any(item.startswith(("P4.1", "P4.2")) for item in out)

    def test_p6_buffer_arc_breach(self):
        board, st = self._protected_game()
        a0 = st.A_0
        placed = False
        for i, x in enumerate(a0):
            for y in a0[i + 1 :]:
                if board.pair_undirected(x, y):
                    board.direct(x, y)
                    placed = True
                    break
            if placed:
                break
        assert placed
        out = verify_protected(board, st)
        assert any(item.startswith("P6") for item in out)


class TestSizeBounds:
    def test_empty_board(self):
        out = size_bounds(OrientationBoard(50), RisklessState(), 0, 47)
        assert out["ok"] and out["sizeXA"] == 50 and out["sizeYB"] == 50

    def test_holds_through_building_phase(self):
        n, b = 200, 190
        rng = random.Random(1)
        board = OrientationBoard(n)
        st = new_strict_state(n, b)
        for r in range(n // 25):
            u, v = board.undirected_pair_at(rng.randrange(board.undirected_count))
            if rng.random() < 0.5:
                u, v = v, u
            board.direct(u, v, OMAKER)
            _, st = respond_strict(st, board, (u, v), b, n)
            if st.phase == "I":
                assert size_bounds(board, st.riskless, st.round, b)["ok"], r

    def test_oversized_side_rejected(self):
        n = 50
        st = RisklessState(A_0=list(range(11)), B_0=list(range(11, 22)))
        board = OrientationBoard(n)
        for a in st.A_0:
            for bb in st.B_0:
                board.direct(a, bb)
        out = size_bounds(board, st, 0, 47)
        assert not out["ok"]  # |A| = 11 >= n/5 + 1


class TestTransition:
    def test_end_of_building_phase_transitions(self):
        for n in (200, 400):
            b = -(-19 * n // 20)
            board, st = play_strict_prefix(n, b, seed=2, rounds=n // 25)
            assert st.phase == "II"
            assert st.transition_round == n // 25
            assert verify_protected(board, st.protected) == []
            assert protected_is_acyclic(board, st.protected)

    def test_small_buffer_fails_p1(self):
        # starve the buffer: a rank-1 riskless state on a tiny board
        board = OrientationBoard(30)
        st = RisklessState(A_S=[0], A_0=[1], B_S=[2], B_0=[3])
        board.direct(0, 2)
        board.direct(0, 3)
        board.direct(1, 2)
        board.direct(1, 3)
        with pytest.raises(TransitionFailed):
            transition(board, st, 30, 27)


class TestDuality:
    def test_dual_of_empty_is_empty(self):
        st = RisklessState()
        assert st.dual().summary() == st.summary()

    def test_dual_is_involution(self):
        st = RisklessState(A_S=[1, 2], A_0=[3], B_S=[4, 5], B_0=[6])
        assert st.dual().dual() == st
        ps = ProtectedState(
            A_D=[0], A_AD=[1], A_S=[2], A_0=[3], B_D=[4], B_AD=[5], B_S=[6], B_0=[7]
        )
        assert ps.dual().dual() == ps

    def test_midgame_state_dual_verifies_on_reversed_board(self):
        n, b = 200, 190
        board, st = play_strict_prefix(n, b, seed=3, rounds=5)
        rev = board.reversed_board()
        assert verify_riskless(rev, st.riskless.dual()) == []
        board, st = play_strict_prefix(n, b, seed=3, rounds=n // 25 + 3)
        rev = board.reversed_board()
        assert verify_protected(rev, st.protected.dual()) == []


class TestThreshold:
    def test_derived_constant(self):
        assert smallest_transition_n() == 200

    def test_forcing_profile(self):
        assert not forcing_holds(199)
        assert not forcing_holds(201)  # rounding dips between multiples of 25
        for n in (200, 225, 250, 400):
            assert forcing_holds(n)

    def test_below_sixty_never_qualifies(self):
        assert all(not forcing_holds(n) for n in range(1, 60))
