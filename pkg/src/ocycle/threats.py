"""Immediate-threat bookkeeping shared by adversaries and the game loop.

Two helpers live here:

:class:`ThreatIndex` incrementally tracks the set of undirected pairs that
would close a directed *triangle*.  When the board is acyclic, some pair can
close a cycle iff some pair can close a triangle (shorten a closable cycle
along a chord), so emptiness of this set is an exact "nobody can close"
test.  Maintenance is two mask intersections per applied arc, which keeps
full games cheap even at a few hundred vertices.

:class:`ClosureMatrix` mirrors the board into numpy reachability and
undirected-pair matrices and evaluates, for every available arc at once,
how many closing arcs the opponent would face after it is directed.  That
count drives the threat-maximising adversary and is oracle-tested against
brute force.
"""

from __future__ import annotations

import numpy as np

from .board import Arc, OrientationBoard, bits


def pair_key(u: int, v: int) -> Arc:
    return (u, v) if u < v else (v, u)


class ThreatIndex:
    """Tracks undirected pairs admitting a 2-path between their endpoints.

    A pair {a, b} is recorded when some directed path b -> x -> a or
    a -> x -> b exists while {a, b} is undirected; directing the matching
    orientation closes a triangle.  Sync consumes the board's append-only
    arc log, so one index can follow a live game.
    """

    def __init__(self, board: OrientationBoard):
        self.board = board
        self.closable: set[Arc] = set()
        self._cursor = 0

    def sync(self) -> bool:
        """Consume fresh log entries; True when some applied arc's pair was
        marked closable with a two-path in the closing direction around
        (an actual cycle is then plausible and worth a full check)."""
        b = self.board
        log = b.log
        hot = False
        while self._cursor < len(log):
            t, h, _ = log[self._cursor]
            self._cursor += 1
            key = pair_key(t, h)
            if key in self.closable and b.out[h] & b.inn[t]:
                hot = True
            self.closable.discard(key)
            # new 2-paths w -> t -> h make {w, h} closable
            for w in bits(b.inn[t] & b.und[h]):
                self.closable.add(pair_key(w, h))
            # new 2-paths t -> h -> v make {t, v} closable
            for v in bits(b.out[h] & b.und[t]):
                self.closable.add(pair_key(t, v))
        return hot

    def any_closable(self) -> bool:
        self.sync()
        return bool(self.closable)

    def triangle_closing_arcs(self) -> list[Arc]:
        """All arcs closing a triangle, sorted lexicographically."""
        self.sync()
        b = self.board
        out: list[Arc] = []
        for p, q in self.closable:
            # (p, q) closes iff some q -> x -> p exists
            if b.out[q] & b.inn[p]:
                out.append((p, q))
            if b.out[p] & b.inn[q]:
                out.append((q, p))
        out.sort()
        return out


class ClosureMatrix:
    """Reachability / undirected-pair matrices kept in sync with a board."""

    def __init__(self, board: OrientationBoard):
        self.board = board
        n = board.n
        self.reach = np.zeros((n, n), dtype=bool)
        self.und = ~np.eye(n, dtype=bool)
        self._cursor = 0

    def sync(self) -> None:
        b = self.board
        log = b.log
        R = self.reach
        while self._cursor < len(log):
            t, h, _ = log[self._cursor]
            self._cursor += 1
            self.und[t, h] = False
            self.und[h, t] = False
            anc = R[:, t].copy()
            anc[t] = True
            dec = R[h].copy()
            dec[h] = True
            R[np.ix_(anc, dec)] = True

    def threat_counts(self) -> np.ndarray:
        """Matrix C with C[v, w] = |closing arcs of board + (v, w)|.

        Entries off the available set are -1.  For an available (v, w) the
        closing arcs of the extended board are the ordered pairs (x, y)
        with {x, y} still undirected and a y -> x path; splitting paths by
        whether they use the new arc gives

            C = base + (R*)^T (U & ~R) (R*)^T  - 1 - R^T

        with R* = R | I, U the undirected matrix and base the count of
        already-closable ordered pairs.
        """
        self.sync()
        R = self.reach
        U = self.und
        base = int((U & R).sum())
        rstar = (R | np.eye(self.board.n, dtype=bool)).astype(np.float32)
        m1 = (U & ~R).astype(np.float32)
        np_term = rstar.T @ (m1 @ rstar.T)
        counts = np.rint(np_term).astype(np.int64) + base - 1 - R.T.astype(np.int64)
        counts[~U] = -1
        return counts

    def best_arc(self) -> Arc:
        """Available arc maximising the threat count, lex tie-break."""
        counts = self.threat_counts()
        flat = int(np.argmax(counts))
        v, w = divmod(flat, self.board.n)
        return (v, w)


def count_closing_after(board: OrientationBoard, arc: Arc) -> int:
    """Brute-force |closing_arcs(board + arc)| on a copy (test oracle)."""
    b = board.copy()
    b.direct(arc[0], arc[1])
    return len(b.closing_arcs())
