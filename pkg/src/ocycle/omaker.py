"""OMaker adversaries and the deliberately weak sparring OBreaker.

Every adversary implements ``move(board) -> Arc`` returning an available
arc, plus ``reset(board)`` binding it to a fresh game.  The cycle-seeking
wrapper consults the shared triangle tracker each turn, so the check for
"can I close right now" costs two mask intersections per arc that appeared
since the last turn.

The sparring partner closes immediate threats only; it exists to reproduce
the failure mode where a long path suddenly spawns more threats than the
bias can cover.
"""

from __future__ import annotations

import random
from typing import Optional

from .board import OBREAKER, OMAKER, Arc, OrientationBoard, Signal, bits
from .threats import ClosureMatrix, ThreatIndex


class NoMove(RuntimeError):
    """The adversary was asked to move on a full board."""


class RandomArc:
    """Uniform over available arcs: uniform undirected pair, coin for the
    orientation."""

    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def reset(self, board: OrientationBoard) -> None:
        self.board = board

    def move(self, board: OrientationBoard) -> Arc:
        if board.is_full():
            raise NoMove("board full")
        u, v = board.undirected_pair_at(self.rng.randrange(board.undirected_count))
        return (u, v) if self.rng.random() < 0.5 else (v, u)


class LongPath:
    """Grow one directed path, head first, restarting when the head jams."""

    name = "longpath"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self.path: list[int] = []

    def reset(self, board: OrientationBoard) -> None:
        self.board = board
        self.path = []

    def _path_mask(self) -> int:
        m = 0
        for v in self.path:
            m |= 1 << v
        return m

    def move(self, board: OrientationBoard) -> Arc:
        if board.is_full():
            raise NoMove("board full")
        if self.path:
            head = self.path[-1]
            m = board.und[head] & ~self._path_mask()
            if m:
                nxt = (m & -m).bit_length() - 1
                self.path.append(nxt)
                return (head, nxt)
        # stuck (or first move): restart from the lowest vertex that still
        # has an undirected pair
        for v in range(board.n):
            m = board.und[v]
            if m:
                nxt = (m & -m).bit_length() - 1
                self.path = [v, nxt]
                return (v, nxt)
        raise NoMove("no available arc")


class CloseOrElse:
    """Close a shortest closable cycle when one exists, else delegate.

    Whenever any cycle can be closed a triangle can (chords of a shortest
    closable cycle are undirected), so the candidates are exactly the
    triangle-closing arcs; the lexicographically least is played.
    """

    def __init__(self, inner):
        self.inner = inner
        self.name = f"close-or-{inner.name}"
        self.tracker: Optional[ThreatIndex] = None

    def reset(self, board: OrientationBoard) -> None:
        self.inner.reset(board)
        self.tracker = ThreatIndex(board)

    def move(self, board: OrientationBoard) -> Arc:
        if self.tracker is None or self.tracker.board is not board:
            self.tracker = ThreatIndex(board)
        if self.tracker.any_closable():
            candidates = self.tracker.triangle_closing_arcs()
            if candidates:
                return candidates[0]
        return self.inner.move(board)


class MaxThreats:
    """Available arc leaving the opponent the most closing arcs to answer."""

    name = "max-threats"

    def __init__(self, seed: int = 0):
        self.matrix: Optional[ClosureMatrix] = None

    def reset(self, board: OrientationBoard) -> None:
        self.matrix = ClosureMatrix(board)

    def move(self, board: OrientationBoard) -> Arc:
        if board.is_full():
            raise NoMove("board full")
        if self.matrix is None or self.matrix.board is not board:
            self.matrix = ClosureMatrix(board)
        return self.matrix.best_arc()


def make_omaker(name: str, seed: int = 0):
    if name == "random":
        return RandomArc(seed)
    if name == "longpath":
        return LongPath(seed)
    if name == "close-or-random":
        return CloseOrElse(RandomArc(seed))
    if name == "close-or-longpath":
        return CloseOrElse(LongPath(seed))
    if name == "max-threats":
        return MaxThreats(seed)
    raise ValueError(f"unknown OMaker strategy {name!r}")


OMAKER_NAMES = ("close-or-random", "close-or-longpath", "random", "max-threats")


def naive_obreaker(
    board: OrientationBoard, maker_arc: Arc, b: int, strict: bool = False
) -> list[Arc]:
    """Close immediate threats only, lowest lexicographic first, up to b.

    Pads with arbitrary arcs under strict rules; under monotone rules a
    single arbitrary arc is played when no threat exists (a reply must
    direct something).
    """
    blocks = sorted({(h, t) for t, h in board.closing_arcs()})
    out: list[Arc] = []
    for t, h in blocks:
        if len(out) >= b:
            break
        if board.direct(t, h, OBREAKER) is Signal.APPLIED:
            out.append((t, h))
    target = min(b, len(out) + board.undirected_count) if strict else 1
    if len(out) < target:
        for u in range(board.n):
            m = board.und[u]
            while m and len(out) < target:
                h = (m & -m).bit_length() - 1
                m &= m - 1
                if board.direct(u, h, OBREAKER) is Signal.APPLIED:
                    out.append((u, h))
            if len(out) >= target:
                break
    return out
