"""OBreaker strategies for the monotone game.

Two strategies live here.  The main one wins whenever the bias satisfies
``6*b >= 5*n + 12`` (i.e. b is at least five sixths of n plus two): it grows
a uniformly directed biclique (A, B) while absorbing every OMaker arc into
one of two alpha structures, on V minus B and on V minus A, so that no arc
ever starts outside A and ends outside B.  The stages differ only in how
fast A and B grow:

* Stage I adds two vertices to A and one to B per round (or dually) until
  the slack |A| - k reaches n/6,
* Stage II adds a single vertex per round until A and B cover everything,
* Stage III plays the two alpha structures inside A and inside B until the
  board fills.

The second strategy is the spine-and-apex strategy that wins outright for
b >= n - 2: keep an ordered spine of vertices each dominating everything
after it, plus one apex vertex from which every other directed edge must
start.

Strategies mutate the board they are handed (directing their reply) and
return the arcs they directed.  A reversed pair forced by the bookkeeping
raises :class:`ForfeitError`; the constructions guarantee it never fires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import alpha
from .board import (
    OBREAKER,
    Arc,
    Emitter,
    ForfeitError,
    MaskedArcView,
    OrientationBoard,
    Signal,
    bits,
)


@dataclass
class MonotoneState:
    """Stage, biclique sides, the two alpha structures and counters."""

    n: int
    b: int
    stage: str = "I"
    A: list[int] = field(default_factory=list)
    B: list[int] = field(default_factory=list)
    a_mask: int = 0
    b_mask: int = 0
    dec_vb: list[Arc] = field(default_factory=list)  # structure on V \ B
    rank_k: int = 0
    dec_va: list[Arc] = field(default_factory=list)  # structure on V \ A
    rank_l: int = 0
    round: int = 0

    def dual(self) -> "MonotoneState":
        return MonotoneState(
            n=self.n,
            b=self.b,
            stage=self.stage,
            A=list(self.B),
            B=list(self.A),
            a_mask=self.b_mask,
            b_mask=self.a_mask,
            dec_vb=alpha.dual_decisive(self.dec_va),
            rank_k=self.rank_l,
            dec_va=alpha.dual_decisive(self.dec_vb),
            rank_l=self.rank_k,
            round=self.round,
        )

    def summary(self) -> dict:
        return {
            "strategy": "alpha-monotone",
            "stage": self.stage,
            "A": list(self.A),
            "B": list(self.B),
            "k": self.rank_k,
            "l": self.rank_l,
            "round": self.round,
        }


def new_monotone_state(n: int, b: int) -> MonotoneState:
    return MonotoneState(n=n, b=b)


def _lowest_fresh(state: MonotoneState, taken: set[int]) -> int:
    """Lowest-index vertex outside A, B and the per-move reservations.

    When only reserved vertices remain outside the biclique (late Stage II,
    the maker arc's head being the last fresh vertex), the reservation is
    waived; the constructions stay sound for any fresh pick.
    """
    free = state.a_mask | state.b_mask
    fallback = -1
    for v in range(state.n):
        if not (free >> v) & 1:
            if v not in taken:
                return v
            if fallback < 0:
                fallback = v
    if fallback >= 0:
        return fallback
    raise ForfeitError("no fresh vertex left for the biclique")


def _add_to_a(state: MonotoneState, board: OrientationBoard, u: int) -> None:
    state.A.append(u)
    state.a_mask |= 1 << u
    view = MaskedArcView(board, board.full_mask & ~state.a_mask)
    state.dec_va = alpha.restrict_decisive(view, state.dec_va, u)


def _add_to_b(state: MonotoneState, board: OrientationBoard, u: int) -> None:
    state.B.append(u)
    state.b_mask |= 1 << u
    view = MaskedArcView(board, board.full_mask & ~state.b_mask)
    state.dec_vb = alpha.restrict_decisive(view, state.dec_vb, u)


def _respond_growth(state: MonotoneState, board: OrientationBoard, e: Arc) -> list[Arc]:
    """One Stage I or Stage II round with e available in V minus B."""
    v, w = e
    em = Emitter(board)
    view = MaskedArcView(board, board.full_mask & ~state.b_mask)
    f_arcs, dec2 = alpha.add_available_arc(
        view, state.dec_vb, state.rank_k, e, e_applied=True
    )
    for f in f_arcs:
        em.emit(*f)
    state.dec_vb = dec2
    state.rank_k += 1

    taken = {v, w}
    fresh_v = not ((state.a_mask | state.b_mask) >> v) & 1
    if state.stage == "I":
        if fresh_v:
            first = v
        else:
            first = _lowest_fresh(state, taken)
            taken.add(first)
        second = _lowest_fresh(state, taken)
        taken.add(second)
        for u in (first, second):
            for y in state.B:
                em.emit(u, y)
        _add_to_a(state, board, first)
        _add_to_a(state, board, second)
        y_new = _lowest_fresh(state, taken)
        for x in state.A:
            em.emit(x, y_new)
        _add_to_b(state, board, y_new)
    else:
        u = v if fresh_v else _lowest_fresh(state, taken)
        for y in state.B:
            em.emit(u, y)
        _add_to_a(state, board, u)
    return em.arcs


def _respond_stage3(state: MonotoneState, board: OrientationBoard, e: Arc) -> list[Arc]:
    """Stage III round with e inside A; B-side rounds run through the dual."""
    em = Emitter(board)
    _absorb_a_side(state, board, em, e)
    if not em.arcs:
        extra = _lowest_available_inside(state, board)
        if extra is not None:
            em.emit(*extra)
            if (state.a_mask >> extra[0]) & 1:
                _absorb_a_side(state, board, em, extra)
            else:
                _absorb_b_side(state, board, em, extra)
    return em.arcs


def _absorb_a_side(
    state: MonotoneState, board: OrientationBoard, em: Emitter, e: Arc
) -> None:
    view = MaskedArcView(board, state.a_mask)
    f_arcs, dec2 = alpha.add_available_arc(
        view, state.dec_vb, state.rank_k, e, e_applied=True
    )
    state.dec_vb = dec2
    state.rank_k += 1
    for f in f_arcs:
        em.emit(*f)


def _absorb_b_side(
    state: MonotoneState, board: OrientationBoard, em: Emitter, e: Arc
) -> None:
    view = MaskedArcView(board, state.b_mask)
    f_arcs, dec2 = alpha.add_available_arc(
        view, state.dec_va, state.rank_l, e, e_applied=True
    )
    state.dec_va = dec2
    state.rank_l += 1
    for f in f_arcs:
        em.emit(*f)


def _lowest_available_inside(
    state: MonotoneState, board: OrientationBoard
) -> Optional[Arc]:
    """Lowest lexicographic available arc inside A, else inside B."""
    for mask in (state.a_mask, state.b_mask):
        for t in bits(mask):
            m = board.und[t] & mask
            if m:
                return (t, (m & -m).bit_length() - 1)
    return None


def respond_monotone(
    state: MonotoneState, board: OrientationBoard, maker_arc: Arc
) -> tuple[list[Arc], MonotoneState]:
    """Reply to OMaker's arc (already on the board), restoring the stage
    invariants.  Returns the directed arcs and the updated state."""
    v, w = maker_arc
    both = (1 << v) | (1 << w)
    in_vb = not (both & state.b_mask)
    in_va = not (both & state.a_mask)
    if in_vb and in_va:
        primal = v < w  # canonical pick keeps mirrored games exact mirrors
    elif in_vb:
        primal = True
    elif in_va:
        primal = False
    else:
        raise ForfeitError(f"maker arc {maker_arc} crosses the biclique")

    run = _respond_stage3 if state.stage == "III" else _respond_growth
    if primal:
        arcs = run(state, board, maker_arc)
        out_state = state
    else:
        rev = board.reversed_board()
        dual_state = state.dual()
        arcs_d = run(dual_state, rev, (w, v))
        arcs = []
        for t, h in arcs_d:
            sig = board.direct(h, t, OBREAKER)
            if sig is not Signal.APPLIED:
                raise ForfeitError(f"dual replay failed on ({h},{t}): {sig}")
            arcs.append((h, t))
        out_state = dual_state.dual()

    out_state.round += 1
    if out_state.stage == "I" and 6 * (len(out_state.A) - out_state.rank_k) >= out_state.n:
        out_state.stage = "II"
    if (
        out_state.stage == "II"
        and (out_state.a_mask | out_state.b_mask) == board.full_mask
    ):
        out_state.stage = "III"
    return arcs, out_state


def check_monotone_invariants(
    state: MonotoneState, board: OrientationBoard, deep: bool = True
) -> list[str]:
    """Validate the current stage's properties; empty list when clean.

    ``deep`` additionally re-verifies both alpha structures arc by arc
    (quadratic in their rank, meant for tests and deep transcript checks).
    """
    v: list[str] = []
    n = state.n
    full = board.full_mask
    if state.a_mask & state.b_mask:
        v.append("UDB: A and B intersect")
    for a in state.A:
        if (board.out[a] & state.b_mask) != state.b_mask:
            v.append(f"UDB: vertex {a} does not dominate all of B")
            break
    outside_b = full & ~state.b_mask
    outside_a = full & ~state.a_mask
    fresh = outside_a & outside_b
    stage = state.stage
    label = {"I": "S1", "II": "S2", "III": "S3"}[stage]
    for t in bits(fresh):
        if board.out[t] & outside_b:
            v.append(f"{label}.1: arc from {t} (outside A) inside V\\B")
            break
    for h in bits(fresh):
        if board.inn[h] & outside_a:
            v.append(f"{label}.2: arc into {h} (outside B) inside V\\A")
            break
    if deep:
        for code, mask, dec, rank in (
            (f"{label}.1", outside_b, state.dec_vb, state.rank_k),
            (f"{label}.2", outside_a, state.dec_va, state.rank_l),
        ):
            for item in alpha.verify_alpha(MaskedArcView(board, mask), dec, rank):
                v.append(f"{code}: {item}")
    if stage == "I":
        if state.rank_k + state.rank_l != state.round:
            v.append(f"S1.3: k+l={state.rank_k + state.rank_l} != round {state.round}")
        if not (
            len(state.A) - state.rank_k == state.round
            and len(state.B) - state.rank_l == state.round
        ):
            v.append("S1.4: |A|-k or |B|-l differs from the round counter")
    elif stage == "II":
        if 6 * (len(state.A) - state.rank_k) < n or 6 * (len(state.B) - state.rank_l) < n:
            v.append("S2.3: buffer |A|-k or |B|-l dropped below n/6")
        if 6 * state.b < 5 * n:
            v.append("S2.3: bias below five sixths of n")
    else:
        if (state.a_mask | state.b_mask) != full:
            v.append("S3: A and B do not cover the board")
        if len(state.A) > state.b or len(state.B) > state.b:
            v.append("S3.3: a side exceeds the bias")
    return v


# ---------------------------------------------------------------------------
# spine-and-apex strategy for b >= n - 2
# ---------------------------------------------------------------------------


@dataclass
class TrivialState:
    """Ordered dominating spine plus the apex all stray edges start from."""

    spine: list[int] = field(default_factory=list)
    apex: Optional[int] = None

    def summary(self) -> dict:
        return {"strategy": "trivial", "spine": list(self.spine), "apex": self.apex}


def _spine_mask(ts: TrivialState) -> int:
    m = 0
    for u in ts.spine:
        m |= 1 << u
    return m


def _promote(ts: TrivialState, board: OrientationBoard, em: Emitter, u: int) -> None:
    outside = board.full_mask & ~_spine_mask(ts) & ~(1 << u)
    for y in bits(outside):
        em.emit(u, y)
    ts.spine.append(u)


def respond_trivial(
    ts: TrivialState, board: OrientationBoard, maker_arc: Arc, b: int
) -> tuple[list[Arc], TrivialState]:
    """Restore the spine/apex invariant, then pad to exactly min(b, left)."""
    v, _ = maker_arc
    em = Emitter(board)
    if ts.apex is None:
        ts.apex = v
    elif v != ts.apex:
        if board.has_arc(ts.apex, v):
            _promote(ts, board, em, ts.apex)
            ts.apex = v
        else:
            _promote(ts, board, em, v)
    while len(em.arcs) < b and not board.is_full():
        a = ts.apex
        if a is None:
            break
        m = board.und[a]
        if m:
            em.emit(a, (m & -m).bit_length() - 1)
        else:
            ts.spine.append(a)
            outside = board.full_mask & ~_spine_mask(ts)
            ts.apex = (outside & -outside).bit_length() - 1 if outside else None
    return em.arcs, ts


def check_trivial_invariants(ts: TrivialState, board: OrientationBoard) -> list[str]:
    v: list[str] = []
    seen = 0
    for i, u in enumerate(ts.spine):
        later = board.full_mask & ~seen & ~(1 << u)
        if (board.out[u] & later) != later:
            v.append(f"spine vertex {u} (position {i}) does not dominate the rest")
        seen |= 1 << u
    outside = board.full_mask & ~seen
    for t in bits(outside):
        if ts.apex is not None and t == ts.apex:
            continue
        if board.out[t] & outside:
            v.append(f"directed edge outside the spine starts at {t}, not the apex")
            break
    return v
