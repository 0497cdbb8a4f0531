"""OBreaker's strategy for the strict game (exactly b arcs per reply).

The strategy runs in two phases.  The building phase lasts exactly
floor(n/25) rounds: each round a base step absorbs OMaker's arc into the
riskless shape while raising its rank by one, and an add-edges step tops
the reply up to exactly b arcs by growing the buffers and pre-filling the
in-stars of the B-side centres.  The arc ledger after round r is exactly
r * (b + 1).  The end-of-phase digraph relabels directly as protected, and
the maintenance phase keeps it protected with a base step per OMaker arc
plus one-arc top-ups from a promotion ladder until the board fills.

OMaker arcs landing on the wrong side of the biclique are handled by
running the same constructions on the reversed board against the dual
state and replaying the reversed arcs, so the strategy is self-dual; when
an arc is playable on either side the lexicographically oriented one picks
the primal side, which keeps mirrored games exact mirrors.

Everything here directs the arcs it returns on the board it is given and
raises :class:`ForfeitError` if that would ever need a reversed pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .board import (
    OBREAKER,
    Arc,
    Emitter,
    ForfeitError,
    OrientationBoard,
    Signal,
    bits,
)
from .riskless import (
    ProtectedState,
    RisklessState,
    transition,
    verify_protected,
    verify_riskless,
)


class StructureExhausted(RuntimeError):
    """A fresh-vertex pick failed; impossible while the size bounds hold."""


class InvariantBreach(RuntimeError):
    """The board contradicts the certificate the strategy carries."""


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# ---------------------------------------------------------------------------
# building phase
# ---------------------------------------------------------------------------


def base_I(
    board: OrientationBoard,
    state: RisklessState,
    r: int,
    b: int,
    e: Arc,
) -> tuple[list[Arc], RisklessState]:
    """Absorb e (already on the board) into the riskless shape at rank r+1.

    Picks a fresh star centre, a fresh B-side centre and up to seven arc
    families restoring the shape; emits only the arcs that are actually
    new.  Returns the directed arcs and the reshaped state.
    """
    v, w = e
    a_s = _mask(state.A_S)
    a0 = _mask(state.A_0)
    a_mask = a_s | a0
    b_mask = _mask(state.B_S) | _mask(state.B_0)
    fresh = board.full_mask & ~a_mask & ~b_mask & ~(1 << v) & ~(1 << w)

    x_a = y_b = -1
    for z in bits(fresh):
        if not board.inn[z] & a_mask:
            x_a = z
            break
    for z in bits(fresh):
        if z != x_a and not board.out[z] & b_mask:
            y_b = z
            break
    if x_a < 0 or y_b < 0:
        raise StructureExhausted("no untouched vertex for the new centres")

    in_as = bool((a_s >> v) & 1)
    in_a = bool((a_mask >> v) & 1)
    u_s = x_a if in_as else v
    u_a = x_a if in_a else v

    ell = r + 1
    for i, vi in enumerate(state.A_S, start=1):
        if not board.has_arc(vi, v):
            ell = i
            break
    vprime = state.A_S[: ell - 1] + [u_s] + state.A_S[ell - 1 :]
    wprime = [y_b] + state.B_S

    fam1 = sorted((u_a, y) for y in state.b_members())
    fam2 = sorted((x, y_b) for x in state.a_members() + [u_a])
    fam3 = sorted((y_b, wi) for wi in wprime[1:])
    fam4 = sorted((vprime[i], w) for i in range(ell) if vprime[i] != w)
    fam5 = sorted((vprime[i], vprime[ell - 1]) for i in range(ell - 1))
    fam6 = sorted((vprime[ell - 1], vprime[i]) for i in range(ell, r + 1))
    fam7: list[Arc] = []
    if ell <= r:
        vnext = vprime[ell]
        zone = (board.full_mask & ~a_mask & ~b_mask) | a0
        for z in bits(board.out[vnext] & zone):
            if z != vprime[ell - 1]:
                fam7.append((vprime[ell - 1], z))
        fam7.sort()

    em = Emitter(board)
    for fam in (fam1, fam2, fam3, fam4, fam5, fam6, fam7):
        for t, h in fam:
            em.emit(t, h)

    new_a0 = [x for x in state.A_0 if x != u_s]
    if u_a != u_s:
        new_a0.append(u_a)
    out = RisklessState(A_S=vprime, A_0=new_a0, B_S=wprime, B_0=list(state.B_0))
    return em.arcs, out


def add_edges_I(
    board: OrientationBoard,
    state: RisklessState,
    r: int,
    b: int,
    t: int,
) -> list[Arc]:
    """Direct exactly t further arcs keeping the rank-(r+1) shape intact.

    Step 1 grows the smaller buffer with fully connected fresh vertices
    while t is at least the larger side; step 2 then fills the in-stars of
    the B-side centres bottom-up, never touching the newest centre's star.
    Mutates ``state`` in place (buffer growth only).
    """
    em = Emitter(board)
    while t > 0:
        a_mask = _mask(state.a_members())
        b_mask = _mask(state.b_members())
        fresh = board.full_mask & ~a_mask & ~b_mask
        size_a, size_b = a_mask.bit_count(), b_mask.bit_count()
        mx = max(size_a, size_b)
        if t >= mx:
            if size_b == size_a - 1:
                cand = [z for z in bits(fresh) if not board.out[z] & b_mask]
                if not cand:
                    raise StructureExhausted("no untouched vertex to grow B")
                y = cand[0]
                for x in sorted(state.a_members()):
                    if not board.has_arc(x, y):
                        em.emit(x, y)
                        t -= 1
                state.B_0.append(y)
            else:
                cand = [z for z in bits(fresh) if not board.inn[z] & a_mask]
                if not cand:
                    raise StructureExhausted("no untouched vertex to grow A")
                x = cand[0]
                for y in sorted(state.b_members()):
                    if not board.has_arc(x, y):
                        em.emit(x, y)
                        t -= 1
                state.A_0.append(x)
            continue
        # step 2: fill the B-side in-stars, newest centre last
        w_last = state.B_S[-1]
        if (board.inn[w_last] & fresh).bit_count() < mx:
            z = -1
            for cand in bits(fresh):
                if not board.out[cand] & b_mask:
                    z = cand
                    break
            if z < 0:
                raise StructureExhausted("no source vertex for the newest star")
            em.emit(z, w_last)
            t -= 1
            continue
        pick: Optional[Arc] = None
        for pos in range(len(state.B_S) - 2, -1, -1):
            wl = state.B_S[pos]
            if (board.inn[wl] & fresh).bit_count() < mx:
                wnext = state.B_S[pos + 1]
                for z in bits(board.inn[wnext] & fresh):
                    if board.pair_undirected(z, wl):
                        pick = (z, wl)
                        break
                break
        if pick is None:
            raise StructureExhausted("no star slot left for the add-edges step")
        em.emit(*pick)
        t -= 1
    return em.arcs


# ---------------------------------------------------------------------------
# maintenance phase
# ---------------------------------------------------------------------------


def base_II(
    board: OrientationBoard,
    state: ProtectedState,
    b: int,
    e: Arc,
) -> tuple[list[Arc], ProtectedState]:
    """Absorb e (already on the board) keeping the digraph protected."""
    v, w = e
    aad = _mask(state.A_AD)
    a_s = _mask(state.A_S)
    ad = _mask(state.A_D)
    a0 = _mask(state.A_0)
    a_mask = ad | aad | a_s | a0
    b_mask = _mask(state.b_members())
    fresh = board.full_mask & ~a_mask & ~b_mask
    enum = state.a_enum()
    k1, k2 = len(state.A_AD), len(state.A_S)
    em = Emitter(board)

    if (ad >> v) & 1:
        raise InvariantBreach(f"maker arc {e} starts at a dead vertex")

    if ((aad | a_s) >> v) & 1:
        # the tail already sits in the tournament: close its prefix onto w
        # and retire the top vertex
        ell = enum.index(v) + 1
        fam1 = sorted((enum[i], w) for i in range(ell - 1) if enum[i] != w)
        fam2 = sorted((enum[0], z) for z in state.A_0 if z != enum[0])
        fam3: list[Arc] = []
        if k2 > 0:
            centre = enum[k1]
            fam3 = sorted((centre, z) for z in bits(fresh) if z != centre)
        for fam in (fam1, fam2, fam3):
            for t, h in fam:
                em.emit(t, h)
        if k2 == 0:
            new_aad = enum[1:k1]
            new_as: list[int] = []
        else:
            new_aad = enum[1 : k1 + 1]
            new_as = enum[k1 + 1 :]
        out = ProtectedState(
            A_D=state.A_D + [enum[0]],
            A_AD=new_aad,
            A_S=new_as,
            A_0=list(state.A_0),
            B_D=list(state.B_D),
            B_AD=list(state.B_AD),
            B_S=list(state.B_S),
            B_0=list(state.B_0),
        )
        return em.arcs, out

    # the tail comes from the buffer or the untouched zone: splice it into
    # the tournament
    ell = k1 + k2 + 1
    for i, vi in enumerate(enum, start=1):
        if not board.has_arc(vi, v):
            ell = i
            break
    vprime = enum[: ell - 1] + [v] + enum[ell - 1 :]
    in_a0 = bool((a0 >> v) & 1)

    fam1 = sorted((vprime[i], w) for i in range(ell - 1) if vprime[i] != w)
    fam2 = sorted((v, vprime[i]) for i in range(ell, k1 + k2 + 1))
    zone = fresh | a0
    if ell == k1 + k2 + 1:
        fam3: list[Arc] = []
        if in_a0:
            fam4 = sorted((vprime[0], z) for z in state.A_0 if z != vprime[0])
        else:
            fam4 = sorted((v, y) for y in state.b_members())
        fam5 = sorted(
            (vprime[k1], z) for z in bits(fresh) if z != v and z != vprime[k1]
        )
    else:
        vnext = vprime[ell]
        fam3 = sorted(
            (v, z) for z in bits(board.out[vnext] & zone) if z != v
        )
        if in_a0:
            fam4 = sorted(
                (vprime[0], z)
                for z in state.A_0
                if not board.has_arc(vnext, z) and z != vprime[0]
            )
        else:
            fam4 = sorted((v, y) for y in state.b_members())
        fam5 = sorted(
            (vprime[k1], z)
            for z in bits(fresh & ~board.out[vnext])
            if z != v and z != vprime[k1]
        )
    for fam in (fam1, fam2, fam3, fam4, fam5):
        for t, h in fam:
            em.emit(t, h)

    if in_a0:
        out = ProtectedState(
            A_D=state.A_D + [vprime[0]],
            A_AD=vprime[1 : k1 + 1],
            A_S=vprime[k1 + 1 :],
            A_0=[z for z in state.A_0 if z != v],
            B_D=list(state.B_D),
            B_AD=list(state.B_AD),
            B_S=list(state.B_S),
            B_0=list(state.B_0),
        )
    else:
        out = ProtectedState(
            A_D=list(state.A_D),
            A_AD=vprime[: k1 + 1],
            A_S=vprime[k1 + 1 :],
            A_0=list(state.A_0),
            B_D=list(state.B_D),
            B_AD=list(state.B_AD),
            B_S=list(state.B_S),
            B_0=list(state.B_0),
        )
    return em.arcs, out


class _SideMasks:
    """Vertex masks for one ladder run; promotions keep them valid."""

    __slots__ = ("a0", "fresh")

    def __init__(self, board: OrientationBoard, st: ProtectedState):
        a_mask = _mask(st.a_members())
        b_mask = _mask(st.b_members())
        self.a0 = _mask(st.A_0)
        self.fresh = board.full_mask & ~a_mask & ~b_mask


def _ladder_a_side(
    board: OrientationBoard, st: ProtectedState, masks: Optional[_SideMasks] = None
) -> Optional[Arc]:
    """Pick one arc from the A-side promotion ladder, mutating st.

    Vertices climb buffer -> star -> almost-dead -> dead as their stars
    fill; each promotion is free and the first missing arc found on the
    way is returned.  None means the whole side is dead.
    """
    mc = _SideMasks(board, st) if masks is None else masks
    while True:
        if st.A_AD:
            v1 = st.A_AD[0]
            m = board.und[v1] & mc.a0
            if m:
                return (v1, _lowest(m))
            st.A_D.append(v1)
            st.A_AD.pop(0)
            continue
        if st.A_S:
            v1 = st.A_S[0]
            m = board.und[v1] & mc.fresh
            if m:
                return (v1, _lowest(m))
            st.A_AD = [v1]
            st.A_S.pop(0)
            continue
        if st.A_0 and mc.fresh:
            x = min(st.A_0)
            st.A_S = [x]
            st.A_0 = [z for z in st.A_0 if z != x]
            mc.a0 &= ~(1 << x)
            return (x, _lowest(mc.fresh))
        if len(st.A_0) >= 2 and not mc.fresh:
            ordered = sorted(st.A_0)
            x, y = ordered[0], ordered[1]
            st.A_AD = [x]
            st.A_0 = [z for z in st.A_0 if z != x]
            mc.a0 &= ~(1 << x)
            return (x, y)
        if len(st.A_0) == 1 and not mc.fresh:
            st.A_D.append(st.A_0[0])
            st.A_0 = []
            mc.a0 = 0
            continue
        return None


def add_edges_II(
    board: OrientationBoard, state: ProtectedState
) -> tuple[Optional[Arc], ProtectedState]:
    """Direct one further arc keeping the digraph protected.

    Tries the A-side ladder, then the B side through the dual, finally an
    undirected pair in the untouched zone.  Returns (None, state) only
    when the board is already a full tournament.
    """
    arcs, state = _run_topup(board, state, 1)
    return (arcs[0] if arcs else None), state


def _run_topup(
    board: OrientationBoard, state: ProtectedState, want: int
) -> tuple[list[Arc], ProtectedState]:
    """Direct up to ``want`` ladder arcs, switching sides as they die."""
    arcs: list[Arc] = []
    while len(arcs) < want:
        mc = _SideMasks(board, state)
        while len(arcs) < want:
            arc = _ladder_a_side(board, state, mc)
            if arc is None:
                break
            _direct_checked(board, arc)
            arcs.append(arc)
        if len(arcs) >= want:
            break
        rev = board.reversed_board()
        dual = state.dual()
        mc_d = _SideMasks(rev, dual)
        while len(arcs) < want:
            arc_d = _ladder_a_side(rev, dual, mc_d)
            if arc_d is None:
                break
            sig = rev.direct(arc_d[0], arc_d[1], OBREAKER)
            if sig is not Signal.APPLIED:
                raise ForfeitError(f"dual ladder arc {arc_d} rejected: {sig}")
            real = (arc_d[1], arc_d[0])
            _direct_checked(board, real)
            arcs.append(real)
        state = dual.dual()
        if len(arcs) >= want:
            break
        # both sides fully dead: seed a star from an untouched pair
        a_mask = _mask(state.a_members())
        b_mask = _mask(state.b_members())
        freshm = board.full_mask & ~a_mask & ~b_mask
        pair: Optional[Arc] = None
        for x in bits(freshm):
            m = board.und[x] & freshm
            if m:
                pair = (x, _lowest(m))
                break
        if pair is None:
            if not board.is_full():
                raise InvariantBreach("no ladder arc found on a non-full board")
            break
        state.A_S = [pair[0]]
        _direct_checked(board, pair)
        arcs.append(pair)
    return arcs, state


def _direct_checked(board: OrientationBoard, arc: Arc) -> None:
    sig = board.direct(arc[0], arc[1], OBREAKER)
    if sig is not Signal.APPLIED:
        raise ForfeitError(f"ladder arc {arc} rejected: {sig}")


# ---------------------------------------------------------------------------
# full-game driver
# ---------------------------------------------------------------------------


@dataclass
class StrictState:
    """Phase, its certificate, and the round counter."""

    n: int
    b: int
    phase: str = "I"
    riskless: RisklessState = field(default_factory=RisklessState)
    protected: Optional[ProtectedState] = None
    round: int = 0
    transition_round: Optional[int] = None

    def summary(self) -> dict:
        cert = self.protected if self.phase == "II" else self.riskless
        out = {"strategy": "riskless-strict", "round": self.round}
        out.update(cert.summary() if cert is not None else {})
        return out


def new_strict_state(n: int, b: int) -> StrictState:
    return StrictState(n=n, b=b)


def respond_strict(
    st: StrictState, board: OrientationBoard, maker_arc: Arc, b: int, n: int
) -> tuple[list[Arc], StrictState]:
    """Reply with exactly b arcs (fewer only when the board fills)."""
    v, w = maker_arc
    both = (1 << v) | (1 << w)
    if st.phase == "I":
        state = st.riskless
        a_mask = _mask(state.a_members())
        b_mask = _mask(state.b_members())
    else:
        state = st.protected
        a_mask = _mask(state.a_members())
        b_mask = _mask(state.b_members())
    in_vb = not (both & b_mask)
    in_va = not (both & a_mask)
    if in_vb and in_va:
        primal = v < w
    elif in_vb:
        primal = True
    elif in_va:
        primal = False
    else:
        raise InvariantBreach(f"maker arc {maker_arc} crosses the biclique")

    if st.phase == "I":
        r = st.round
        if primal:
            arcs, state2 = base_I(board, state, r, b, maker_arc)
            t = (r + 1) * (b + 1) - board.arc_count
            if t < 0:
                raise InvariantBreach("base step overshot the arc ledger")
            arcs += add_edges_I(board, state2, r, b, t)
        else:
            rev = board.reversed_board()
            dual = state.dual()
            arcs_d, dual2 = base_I(rev, dual, r, b, (w, v))
            t = (r + 1) * (b + 1) - rev.arc_count
            if t < 0:
                raise InvariantBreach("base step overshot the arc ledger")
            arcs_d += add_edges_I(rev, dual2, r, b, t)
            arcs = _replay_reversed(board, arcs_d)
            state2 = dual2.dual()
        st.riskless = state2
        st.round += 1
        if st.round == n // 25:
            st.protected = transition(board, state2, n, b)
            st.phase = "II"
            st.transition_round = st.round
        return arcs, st

    if primal:
        arcs, state2 = base_II(board, state, b, maker_arc)
        more, state2 = _run_topup(board, state2, b - len(arcs))
        arcs += more
    else:
        rev = board.reversed_board()
        dual = state.dual()
        arcs_d, dual2 = base_II(rev, dual, b, (w, v))
        more, dual2 = _run_topup(rev, dual2, b - len(arcs_d))
        arcs_d += more
        arcs = _replay_reversed(board, arcs_d)
        state2 = dual2.dual()
    st.protected = state2
    st.round += 1
    return arcs, st


def _replay_reversed(board: OrientationBoard, arcs_d: list[Arc]) -> list[Arc]:
    out = []
    for t, h in arcs_d:
        sig = board.direct(h, t, OBREAKER)
        if sig is not Signal.APPLIED:
            raise ForfeitError(f"dual replay failed on ({h},{t}): {sig}")
        out.append((h, t))
    return out


def check_strict_invariants(st: StrictState, board: OrientationBoard) -> list[str]:
    """Validate the carried certificate against the board."""
    if st.phase == "I":
        v = verify_riskless(board, st.riskless, st.round)
        expected = st.round * (st.b + 1)
        if board.arc_count != expected:
            v.append(f"ledger: {board.arc_count} arcs, expected {expected}")
        return v
    return verify_protected(board, st.protected)
