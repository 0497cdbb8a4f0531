"""Strict-game certificates: riskless and protected digraphs.

Both certificates describe a uniformly directed biclique (A, B) plus side
partitions that pin down exactly which arcs may exist.  ``riskless`` is the
building-phase shape: A splits into star centres A_S (an ordered transitive
tournament whose out-stars fade with depth) and a buffer A_0, mirrored on
B.  ``protected`` is the end-game shape, refining each side with dead and
almost-dead vertices that already dominate everything they could ever hurt.

Validators check every property literally and return one violation string
per breach, with a witness.  All fractional thresholds (n/5, n/10, n/25)
are compared in exact integer arithmetic.  The whole-board checks run on
the board's bitmasks, so a full validation costs O(n) mask operations and
can run after every reply of a full game.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .board import Arc, OrientationBoard, bits


class TransitionFailed(RuntimeError):
    """The rank-n/25 riskless digraph did not validate as protected."""


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass
class RisklessState:
    """Ordered star centres and buffers realising the riskless properties."""

    A_S: list[int] = field(default_factory=list)
    A_0: list[int] = field(default_factory=list)
    B_S: list[int] = field(default_factory=list)
    B_0: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.A_S)

    def a_members(self) -> list[int]:
        return self.A_S + self.A_0

    def b_members(self) -> list[int]:
        return self.B_S + self.B_0

    def dual(self) -> "RisklessState":
        return RisklessState(
            A_S=list(reversed(self.B_S)),
            A_0=list(self.B_0),
            B_S=list(reversed(self.A_S)),
            B_0=list(self.A_0),
        )

    def summary(self) -> dict:
        return {
            "phase": "riskless",
            "rank": self.rank,
            "A_S": list(self.A_S),
            "A_0": list(self.A_0),
            "B_S": list(self.B_S),
            "B_0": list(self.B_0),
        }


@dataclass
class ProtectedState:
    """Dead / almost-dead / star / buffer partitions of both biclique sides.

    The combined enumerations are A_AD + A_S (top of A's tournament first)
    and B_S + B_AD (so B's almost-dead block sits at the dominated end).
    """

    A_D: list[int] = field(default_factory=list)
    A_AD: list[int] = field(default_factory=list)
    A_S: list[int] = field(default_factory=list)
    A_0: list[int] = field(default_factory=list)
    B_D: list[int] = field(default_factory=list)
    B_AD: list[int] = field(default_factory=list)
    B_S: list[int] = field(default_factory=list)
    B_0: list[int] = field(default_factory=list)

    def a_members(self) -> list[int]:
        return self.A_D + self.A_AD + self.A_S + self.A_0

    def b_members(self) -> list[int]:
        return self.B_D + self.B_AD + self.B_S + self.B_0

    def a_enum(self) -> list[int]:
        return self.A_AD + self.A_S

    def b_enum(self) -> list[int]:
        return self.B_S + self.B_AD

    def dual(self) -> "ProtectedState":
        return ProtectedState(
            A_D=list(self.B_D),
            A_AD=list(reversed(self.B_AD)),
            A_S=list(reversed(self.B_S)),
            A_0=list(self.B_0),
            B_D=list(self.A_D),
            B_AD=list(reversed(self.A_AD)),
            B_S=list(reversed(self.A_S)),
            B_0=list(self.A_0),
        )

    def summary(self) -> dict:
        return {
            "phase": "protected",
            "A_D": list(self.A_D),
            "A_AD": list(self.A_AD),
            "A_S": list(self.A_S),
            "A_0": list(self.A_0),
            "B_D": list(self.B_D),
            "B_AD": list(self.B_AD),
            "B_S": list(self.B_S),
            "B_0": list(self.B_0),
        }


AnyState = Union[RisklessState, ProtectedState]


def dual_state(state: AnyState) -> AnyState:
    return state.dual()


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------


def _check_partition(board: OrientationBoard, classes: dict[str, list[int]]) -> list[str]:
    v: list[str] = []
    seen: dict[int, str] = {}
    for name, members in classes.items():
        for x in members:
            if not 0 <= x < board.n:
                v.append(f"partition: vertex {x} in {name} out of range")
            elif x in seen:
                v.append(f"partition: vertex {x} in both {seen[x]} and {name}")
            else:
                seen[x] = name
    return v


def _check_udb(board: OrientationBoard, a_mask: int, b_mask: int, label: str) -> list[str]:
    for a in bits(a_mask):
        missing = b_mask & ~board.out[a]
        if missing:
            w = (missing & -missing).bit_length() - 1
            return [f"{label}: pair ({a},{w}) not directed A to B"]
    return []


def _check_enum_transitive(
    board: OrientationBoard, enum: list[int], label: str
) -> list[str]:
    suffix = 0
    for idx in range(len(enum) - 1, -1, -1):
        u = enum[idx]
        if (board.out[u] & suffix) != suffix:
            missing = suffix & ~board.out[u]
            w = (missing & -missing).bit_length() - 1
            return [f"{label}: enumeration arc ({u},{w}) missing"]
        suffix |= 1 << u
    return []


def _check_down_sets(
    board: OrientationBoard, enum: list[int], zone: int, label: str
) -> list[str]:
    # {i : (v_i, z) in D} is a prefix of the enumeration for every z in the
    # zone  <=>  consecutive out-star restrictions are nested downward.
    for idx in range(len(enum) - 1):
        lower = board.out[enum[idx]] & zone
        upper = board.out[enum[idx + 1]] & zone
        stray = upper & ~lower
        if stray:
            z = (stray & -stray).bit_length() - 1
            return [
                f"{label}: ({enum[idx + 1]},{z}) present but ({enum[idx]},{z}) missing"
            ]
    return []


def _check_up_sets(
    board: OrientationBoard, enum: list[int], zone: int, label: str
) -> list[str]:
    for idx in range(len(enum) - 1):
        lower = board.inn[enum[idx]] & zone
        upper = board.inn[enum[idx + 1]] & zone
        stray = lower & ~upper
        if stray:
            z = (stray & -stray).bit_length() - 1
            return [
                f"{label}: ({z},{enum[idx]}) present but ({z},{enum[idx + 1]}) missing"
            ]
    return []


def verify_riskless(
    board: OrientationBoard, state: RisklessState, rank: int | None = None
) -> list[str]:
    """Check the riskless properties literally; empty list when clean."""
    v: list[str] = []
    r = state.rank if rank is None else rank
    v += _check_partition(
        board, {"A_S": state.A_S, "A_0": state.A_0, "B_S": state.B_S, "B_0": state.B_0}
    )
    if v:
        return v
    n = board.n
    as_mask = _mask(state.A_S)
    a0_mask = _mask(state.A_0)
    bs_mask = _mask(state.B_S)
    b0_mask = _mask(state.B_0)
    a_mask = as_mask | a0_mask
    b_mask = bs_mask | b0_mask
    fresh = board.full_mask & ~a_mask & ~b_mask
    size_a, size_b = len(state.A_S) + len(state.A_0), len(state.B_S) + len(state.B_0)
    max_ab = max(size_a, size_b)

    if len(state.A_S) != r or len(state.B_S) != r:
        v.append(f"R1: |A_S|={len(state.A_S)}, |B_S|={len(state.B_S)}, rank={r}")
    if abs(size_a - size_b) > 1:
        v.append(f"R1: ||A|-|B|| = {abs(size_a - size_b)} > 1")
    v += _check_udb(board, a_mask, b_mask, "UDB")
    v += _check_enum_transitive(board, state.A_S, "R2.1")
    v += _check_enum_transitive(board, state.B_S, "R2.1")
    v += _check_down_sets(board, state.A_S, a0_mask | fresh, "R2.2")
    v += _check_up_sets(board, state.B_S, b0_mask | fresh, "R2.3")
    for idx, vi in enumerate(state.A_S):
        if (board.out[vi] & a0_mask).bit_count() > r - idx:
            v.append(f"R3.1: out-star of {vi} into A_0 exceeds {r - idx}")
        if (board.out[vi] & fresh).bit_count() > max_ab:
            v.append(f"R3.1: out-star of {vi} outside A,B exceeds max(|A|,|B|)")
    for idx, wi in enumerate(state.B_S):
        if (board.inn[wi] & b0_mask).bit_count() > idx + 1:
            v.append(f"R3.2: in-star of {wi} from B_0 exceeds {idx + 1}")
        if (board.inn[wi] & fresh).bit_count() > max_ab:
            v.append(f"R3.2: in-star of {wi} from outside A,B exceeds max(|A|,|B|)")
    all_mask = board.full_mask
    for u in range(n):
        if (a_mask >> u) & 1:
            allowed = all_mask if (as_mask >> u) & 1 else b_mask
        else:
            allowed = bs_mask
        stray = board.out[u] & ~allowed
        if stray:
            z = (stray & -stray).bit_length() - 1
            v.append(f"R4: arc ({u},{z}) outside the allowed edge classes")
            break
    return v


def verify_protected(board: OrientationBoard, state: ProtectedState) -> list[str]:
    """Check the protected properties literally; empty list when clean."""
    v: list[str] = []
    v += _check_partition(
        board,
        {
            "A_D": state.A_D,
            "A_AD": state.A_AD,
            "A_S": state.A_S,
            "A_0": state.A_0,
            "B_D": state.B_D,
            "B_AD": state.B_AD,
            "B_S": state.B_S,
            "B_0": state.B_0,
        },
    )
    if v:
        return v
    n = board.n
    ad = _mask(state.A_D)
    aad = _mask(state.A_AD)
    as_ = _mask(state.A_S)
    a0 = _mask(state.A_0)
    bd = _mask(state.B_D)
    bad = _mask(state.B_AD)
    bs = _mask(state.B_S)
    b0 = _mask(state.B_0)
    a_mask = ad | aad | as_ | a0
    b_mask = bd | bad | bs | b0
    fresh = board.full_mask & ~a_mask & ~b_mask
    size_a = a_mask.bit_count()
    size_b = b_mask.bit_count()
    k2, l2 = len(state.A_S), len(state.B_S)

    if 10 * size_a < n + 10 or 10 * size_b < n + 10:
        v.append(f"P1: |A|={size_a} or |B|={size_b} below n/10 + 1")
    if 10 * (ad | a0).bit_count() < n or 10 * (bd | b0).bit_count() < n:
        v.append("P1: dead-plus-buffer side below n/10")
    v += _check_udb(board, a_mask, b_mask, "UDB")
    v += _check_udb(board, ad, board.full_mask & ~ad, "P2")
    v += _check_udb(board, board.full_mask & ~bd, bd, "P2")
    for m, label in ((ad, "P2: D(A_D)"), (bd, "P2: D(B_D)")):
        members = list(bits(m))
        sub_scores = sorted((board.out[u] & m).bit_count() for u in members)
        if any(board.und[u] & m for u in members) or sub_scores != list(
            range(len(members))
        ):
            v.append(f"{label} is not a transitive tournament")
    v += _check_udb(board, aad, board.full_mask & ~a_mask, "P3")
    v += _check_udb(board, board.full_mask & ~b_mask, bad, "P3")
    if 25 * k2 > n or 25 * l2 > n:
        v.append(f"P4: k2={k2} or l2={l2} above n/25")
    v += _check_enum_transitive(board, state.a_enum(), "P4.1")
    v += _check_enum_transitive(board, state.b_enum(), "P4.1")
    v += _check_down_sets(board, state.a_enum(), a0 | fresh, "P4.2")
    v += _check_up_sets(board, state.b_enum(), b0 | fresh, "P4.3")
    for i, vi in enumerate(state.A_S, start=1):
        if 25 * ((board.out[vi] & a0).bit_count() + i - 1) > n:
            v.append(f"P5.1: out-star of {vi} into A_0 exceeds n/25 + 1 - {i}")
    for i, wi in enumerate(state.B_S, start=1):
        if 25 * ((board.inn[wi] & b0).bit_count() + l2 - i) > n:
            v.append(f"P5.2: in-star of {wi} from B_0 exceeds n/25 - l2 + {i}")
    for u in range(n):
        if (a_mask >> u) & 1:
            allowed = b_mask if (a0 >> u) & 1 else board.full_mask
        else:
            allowed = bd | bad | bs
        stray = board.out[u] & ~allowed
        if stray:
            z = (stray & -stray).bit_length() - 1
            v.append(f"P6: arc ({u},{z}) outside the allowed edge classes")
            break
    return v


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------


def size_bounds(
    board: OrientationBoard, state: RisklessState, r: int, b: int
) -> dict:
    """Side sizes and untouched-vertex counts with their strict bounds.

    X_A holds the fresh vertices with no arc from A yet, Y_B those with no
    arc into B; ``ok`` reports |A|,|B| < n/5 + 1 and |X_A|,|Y_B| > 2n/5 - 2
    in exact arithmetic.
    """
    n = board.n
    a_mask = _mask(state.a_members())
    b_mask = _mask(state.b_members())
    fresh = board.full_mask & ~a_mask & ~b_mask
    x_a = sum(1 for z in bits(fresh) if not board.inn[z] & a_mask)
    y_b = sum(1 for z in bits(fresh) if not board.out[z] & b_mask)
    size_a = a_mask.bit_count()
    size_b = b_mask.bit_count()
    ok = (
        5 * size_a <= n + 4
        and 5 * size_b <= n + 4
        and 5 * x_a >= 2 * n - 9
        and 5 * y_b >= 2 * n - 9
    )
    return {"sizeA": size_a, "sizeB": size_b, "sizeXA": x_a, "sizeYB": y_b, "ok": ok}


def transition(
    board: OrientationBoard, state: RisklessState, n: int, b: int
) -> ProtectedState:
    """Relabel an end-of-building riskless digraph as protected.

    All star centres become the star blocks of the protected shape; the
    dead and almost-dead blocks start empty.  Raises
    :class:`TransitionFailed` when the protected validator objects, which
    signals n below the derived threshold or an engine bug.
    """
    out = ProtectedState(
        A_S=list(state.A_S),
        A_0=list(state.A_0),
        B_S=list(state.B_S),
        B_0=list(state.B_0),
    )
    violations = verify_protected(board, out)
    if violations:
        raise TransitionFailed("; ".join(violations))
    return out


def protected_is_acyclic(board: OrientationBoard, state: ProtectedState) -> bool:
    """Test helper: a validated protected board must be acyclic."""
    if verify_protected(board, state):
        raise ValueError("state does not validate as protected")
    return not board.has_cycle()


def forcing_holds(n: int) -> bool:
    """Whether the arc-count ledger alone forces the buffer size the
    protected shape needs at rank n/25 and bias ceil(19n/20).

    With r = n // 25, b = ceil(19n/20) and |D| = r(b+1), the edge classes
    give |D| <= (r + a0 + 1)^2 + 4r^2 + 2r(a0 + 1) for the buffer size a0.
    The relabelling needs a0 + 1 >= n/10 + 3, so every smaller buffer must
    contradict the ledger.  Also requires b <= n - 3 so the bias range is
    non-empty.
    """
    r = n // 25
    b = -(-19 * n // 20)
    if r < 1 or b > n - 3:
        return False
    a0p1_max = (n + 29) // 10  # largest integer a0 + 1 strictly below n/10 + 3
    lhs = r * (b + 1)
    rhs = (r + a0p1_max) ** 2 + 4 * r * r + 2 * r * a0p1_max
    return lhs > rhs


def smallest_transition_n(start: int = 60, limit: int = 5000) -> int:
    """Smallest n >= start where :func:`forcing_holds`; the strict-game
    threshold constant used by the acceptance suite."""
    for n in range(start, limit):
        if forcing_holds(n):
            return n
    raise RuntimeError(f"no transition threshold below {limit}")
