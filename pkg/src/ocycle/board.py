"""Loop-free, reverse-arc-free orientation boards.

An :class:`OrientationBoard` tracks, for every unordered pair of vertices of
a complete graph on ``{0, ..., n-1}``, whether the pair is still undirected
or carries one of its two orientations.  Pair states live in a dense
triangular byte array; every set-valued query (out-neighbourhood,
in-neighbourhood, undirected partners) is also mirrored in per-vertex
integer bitmasks so that strategy code gets O(1) orientation lookups and
validators get whole-board checks from a handful of mask operations.

Cycle and reachability queries recompute from scratch on demand; boards are
desk scale (a few hundred vertices) and no incremental structure is kept.
"""

from __future__ import annotations

import json
from enum import Enum
from typing import Iterable, Iterator, Optional

Arc = tuple[int, int]

OMAKER = "OMaker"
OBREAKER = "OBreaker"


class Signal(Enum):
    """Outcome of a direct() call on a single pair."""

    APPLIED = "applied"
    ALREADY_PRESENT = "already-present"
    REVERSE_CONFLICT = "reverse-conflict"


class LoopError(ValueError):
    """Raised when a loop (v, v) is submitted to the board."""


class ForfeitError(RuntimeError):
    """Raised by a strategy that was forced to direct a reversed pair."""


def reverse_arc(arc: Arc) -> Arc:
    return (arc[1], arc[0])


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class OrientationBoard:
    __slots__ = (
        "n",
        "_state",
        "out",
        "inn",
        "und",
        "arc_count",
        "log",
        "_und_pairs",
        "_und_pos",
        "full_mask",
    )

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("board needs at least one vertex")
        self.n = n
        self._state = bytearray(n * (n - 1) // 2)
        self.full_mask = (1 << n) - 1
        self.out = [0] * n
        self.inn = [0] * n
        self.und = [(self.full_mask ^ (1 << v)) for v in range(n)]
        self.arc_count = 0
        # append-only record of applied arcs: (tail, head, actor)
        self.log: list[tuple[int, int, Optional[str]]] = []
        self._und_pairs = list(range(len(self._state)))
        self._und_pos = list(range(len(self._state)))

    # -- pair indexing ----------------------------------------------------

    def _idx(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return u * (2 * self.n - u - 1) // 2 + (v - u - 1)

    def _pair_of_idx(self, idx: int) -> Arc:
        u = 0
        n = self.n
        row = n - 1
        while idx >= row:
            idx -= row
            u += 1
            row -= 1
        return (u, u + 1 + idx)

    @property
    def n_pairs(self) -> int:
        return len(self._state)

    # -- mutation ----------------------------------------------------------

    def direct(self, tail: int, head: int, actor: Optional[str] = None) -> Signal:
        """Orient the pair {tail, head} from tail to head.

        Returns a signal the caller interprets: an already-identical arc is
        reported (and left untouched), a reversed arc is reported without
        change.  A loop is rejected outright.
        """
        n = self.n
        if not (0 <= tail < n and 0 <= head < n):
            raise ValueError(f"vertex out of range: ({tail},{head})")
        if tail == head:
            raise LoopError(f"loop arc ({tail},{head}) rejected")
        i = self._idx(tail, head)
        s = self._state[i]
        want = 1 if tail < head else 2
        if s != 0:
            return Signal.ALREADY_PRESENT if s == want else Signal.REVERSE_CONFLICT
        self._state[i] = want
        bt, bh = 1 << tail, 1 << head
        self.out[tail] |= bh
        self.inn[head] |= bt
        self.und[tail] &= ~bh
        self.und[head] &= ~bt
        # swap-pop the pair out of the undirected pool
        pos = self._und_pos[i]
        last = self._und_pairs[-1]
        self._und_pairs[pos] = last
        self._und_pos[last] = pos
        self._und_pairs.pop()
        self._und_pos[i] = -1
        self.arc_count += 1
        self.log.append((tail, head, actor))
        return Signal.APPLIED

    # -- queries -----------------------------------------------------------

    def has_arc(self, tail: int, head: int) -> bool:
        return bool(self.out[tail] & (1 << head))

    def pair_undirected(self, u: int, v: int) -> bool:
        return self._state[self._idx(u, v)] == 0

    def is_available(self, tail: int, head: int) -> bool:
        return tail != head and self._state[self._idx(tail, head)] == 0

    @property
    def undirected_count(self) -> int:
        return len(self._und_pairs)

    def is_full(self) -> bool:
        return not self._und_pairs

    def undirected_pairs(self) -> list[Arc]:
        return [self._pair_of_idx(i) for i in self._und_pairs]

    def undirected_pair_at(self, k: int) -> Arc:
        """Undirected pair by pool position, for O(1) uniform sampling."""
        return self._pair_of_idx(self._und_pairs[k])

    def available_arcs(self) -> Iterator[Arc]:
        for i in self._und_pairs:
            u, v = self._pair_of_idx(i)
            yield (u, v)
            yield (v, u)

    def available_count(self) -> int:
        return 2 * len(self._und_pairs)

    def arcs(self) -> list[Arc]:
        return sorted((t, h) for t, h, _ in self.log)

    def state_key(self) -> bytes:
        return bytes(self._state)

    # -- structure-level queries --------------------------------------------

    def topological_order(self) -> Optional[list[int]]:
        """Kahn's algorithm; None when the board has a directed cycle."""
        indeg = [self.inn[v].bit_count() for v in range(self.n)]
        stack = [v for v in range(self.n) if indeg[v] == 0]
        order: list[int] = []
        while stack:
            v = stack.pop()
            order.append(v)
            for w in bits(self.out[v]):
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        return order if len(order) == self.n else None

    def has_cycle(self) -> bool:
        return self.topological_order() is None

    def reaches(self, src: int, dst: int) -> bool:
        """True when a directed src -> dst path exists."""
        seen = 1 << src
        frontier = self.out[src]
        target = 1 << dst
        while frontier:
            if frontier & target:
                return True
            seen |= frontier
            nxt = 0
            for v in bits(frontier):
                nxt |= self.out[v]
            frontier = nxt & ~seen
        return False

    def descendant_masks(self) -> list[int]:
        """Strict descendants of each vertex as bitmasks."""
        order = self.topological_order()
        desc = [0] * self.n
        if order is not None:
            for v in reversed(order):
                m = 0
                for w in bits(self.out[v]):
                    m |= desc[w] | (1 << w)
                desc[v] = m
            return desc
        for v in range(self.n):
            seen = 0
            frontier = self.out[v]
            while frontier:
                seen |= frontier
                nxt = 0
                for w in bits(frontier):
                    nxt |= self.out[w]
                frontier = nxt & ~seen
            desc[v] = seen
        return desc

    def closing_arcs(self) -> set[Arc]:
        """Available arcs (v, w) whose direction would close a cycle.

        (v, w) closes a cycle exactly when a directed w -> v path exists.
        """
        desc = self.descendant_masks()
        out: set[Arc] = set()
        for i in self._und_pairs:
            u, v = self._pair_of_idx(i)
            if desc[v] & (1 << u):
                out.add((u, v))
            if desc[u] & (1 << v):
                out.add((v, u))
        return out

    def is_transitive_tournament(self, subset: Optional[Iterable[int]] = None) -> bool:
        """True iff every pair inside the subset (default: all vertices) is
        directed and the induced orientation is acyclic.

        Uses the score-sequence characterisation: a complete tournament is
        transitive iff its out-degrees are pairwise distinct.
        """
        if subset is None:
            mask = self.full_mask
            members = range(self.n)
            count = self.n
        else:
            members = sorted(set(subset))
            mask = 0
            for v in members:
                mask |= 1 << v
            count = len(members)
        if count <= 1:
            return True
        scores = []
        for v in members:
            if self.und[v] & mask:
                return False
            scores.append((self.out[v] & mask).bit_count())
        return sorted(scores) == list(range(count))

    # -- derived boards ------------------------------------------------------

    def copy(self) -> "OrientationBoard":
        b = OrientationBoard.__new__(OrientationBoard)
        b.n = self.n
        b._state = bytearray(self._state)
        b.full_mask = self.full_mask
        b.out = list(self.out)
        b.inn = list(self.inn)
        b.und = list(self.und)
        b.arc_count = self.arc_count
        b.log = list(self.log)
        b._und_pairs = list(self._und_pairs)
        b._und_pos = list(self._und_pos)
        return b

    _REVERSE_TABLE = bytes.maketrans(b"\x01\x02", b"\x02\x01")

    def reversed_board(self) -> "OrientationBoard":
        """The dual board: every arc reversed, availability unchanged."""
        b = OrientationBoard.__new__(OrientationBoard)
        b.n = self.n
        b._state = bytearray(self._state.translate(self._REVERSE_TABLE))
        b.full_mask = self.full_mask
        b.out = list(self.inn)
        b.inn = list(self.out)
        b.und = list(self.und)
        b.arc_count = self.arc_count
        b.log = [(h, t, actor) for t, h, actor in self.log]
        b._und_pairs = list(self._und_pairs)
        b._und_pos = list(self._und_pos)
        return b

    def induced(self, subset: Iterable[int]) -> tuple["OrientationBoard", list[int]]:
        """Board induced on the subset, ids relabelled order-preservingly.

        Returns the induced board and the mapping new-id -> old-id.
        """
        members = sorted(set(subset))
        if not members:
            return _empty_board(), []
        rank = {v: i for i, v in enumerate(members)}
        sub = OrientationBoard(len(members))
        for t, h, actor in self.log:
            if t in rank and h in rank:
                sub.direct(rank[t], rank[h], actor)
        return sub, members

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [[t, h] for t, h in self.arcs()]}

    @classmethod
    def from_json(cls, payload: dict) -> "OrientationBoard":
        b = cls(int(payload["n"]))
        for t, h in payload["arcs"]:
            sig = b.direct(int(t), int(h))
            if sig is not Signal.APPLIED:
                raise ValueError(f"invalid board payload, arc ({t},{h}) -> {sig}")
        return b

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


class Emitter:
    """Directs arcs on a strategy's behalf, collecting the ones applied.

    Already-present arcs are skipped silently (they do not count against
    any budget); a reversed pair means the strategy broke its own
    bookkeeping and forfeits.
    """

    __slots__ = ("board", "arcs")

    def __init__(self, board: OrientationBoard):
        self.board = board
        self.arcs: list[Arc] = []

    def emit(self, tail: int, head: int) -> None:
        sig = self.board.direct(tail, head, OBREAKER)
        if sig is Signal.APPLIED:
            self.arcs.append((tail, head))
        elif sig is Signal.REVERSE_CONFLICT:
            raise ForfeitError(f"strategy asked for reversed pair ({tail},{head})")


class MaskedArcView:
    """Read-only view of a board's arcs induced on a vertex bitmask.

    Duck-types the small arc-set protocol the structure code expects:
    membership, iteration and length, plus pair availability.
    """

    __slots__ = ("board", "mask")

    def __init__(self, board: OrientationBoard, mask: Optional[int] = None):
        self.board = board
        self.mask = board.full_mask if mask is None else mask

    def __contains__(self, arc: Arc) -> bool:
        t, h = arc
        m = self.mask
        return bool((m >> t) & 1 and (m >> h) & 1 and self.board.has_arc(t, h))

    def __iter__(self) -> Iterator[Arc]:
        m = self.mask
        for t in bits(m):
            for h in bits(self.board.out[t] & m):
                yield (t, h)

    def __len__(self) -> int:
        m = self.mask
        return sum((self.board.out[t] & m).bit_count() for t in bits(m))

    def is_available(self, arc: Arc) -> bool:
        t, h = arc
        m = self.mask
        return bool(
            t != h
            and (m >> t) & 1
            and (m >> h) & 1
            and self.board.pair_undirected(t, h)
        )


class _ZeroBoard(OrientationBoard):
    """Degenerate zero-vertex board used only as an induced(∅) result."""

    def __init__(self):  # noqa: D401 - trivial
        self.n = 0
        self._state = bytearray()
        self.full_mask = 0
        self.out = []
        self.inn = []
        self.und = []
        self.arc_count = 0
        self.log = []
        self._und_pairs = []
        self._und_pos = []


def _empty_board() -> OrientationBoard:
    return _ZeroBoard()
