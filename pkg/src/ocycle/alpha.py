"""Alpha structures: digraphs spanned by an ordered list of decisive arcs.

A digraph D is an *alpha structure of rank r* when there are k <= r arcs
e_1, ..., e_k in D (the *decisive arcs*) such that the map
(i, j) -> (tail(e_i), head(e_j)) over 1 <= i <= j <= k is a surjection onto
D.  Such digraphs are acyclic and, crucially for the orientation game, no
available arc can close a cycle in them.  This module implements the image
map, the validator, path reachability through decisive arcs, the add-arc
procedure that absorbs one new arc while raising the rank by one, vertex
restriction, and duality.

Functions accept any arc collection supporting ``in``/iteration/``len``;
:class:`ocycle.board.MaskedArcView` adapts a live board.  The decisive list
order is the structure: arcs are spliced, never re-sorted.
"""

from __future__ import annotations

from typing import Sequence

Arc = tuple[int, int]


class InvalidDecisive(ValueError):
    """The decisive list maps some (i, j) with i <= j onto a loop."""


class NotAvailable(ValueError):
    """The arc handed to the add procedure is not available."""


class ProcedureBroken(RuntimeError):
    """The add procedure produced an arc whose reverse is already present.

    Cannot happen when the preconditions hold; raising loudly beats
    corrupting the structure.
    """


def alpha_image(decisive: Sequence[Arc]) -> set[Arc]:
    """Arcs {(tail(e_i), head(e_j)) : i <= j} spanned by the decisive list."""
    image: set[Arc] = set()
    k = len(decisive)
    for i in range(k):
        ti = decisive[i][0]
        for j in range(i, k):
            hj = decisive[j][1]
            if ti == hj:
                raise InvalidDecisive(
                    f"decisive arcs {i} and {j} map onto the loop ({ti},{hj})"
                )
            image.add((ti, hj))
    return image


def verify_alpha(arcs, decisive: Sequence[Arc], rank: int) -> list[str]:
    """Check the alpha-structure conditions, reporting each violation.

    Empty result means: k <= rank, the decisive image equals the arc set
    exactly (both inclusions), and the arc set is loop- and reverse-free.
    """
    violations: list[str] = []
    if len(decisive) > rank:
        violations.append(f"rank: {len(decisive)} decisive arcs exceed rank {rank}")
    for e in decisive:
        if e not in arcs:
            violations.append(f"decisive: arc {e} missing from digraph")
    try:
        image = alpha_image(decisive)
    except InvalidDecisive as exc:
        violations.append(f"image-loop: {exc}")
        return violations
    for a in sorted(image):
        if a not in arcs:
            violations.append(f"image-not-subset: {a} = alpha image arc missing")
            break
    seen = set()
    for a in sorted(arcs):
        if a[0] == a[1]:
            violations.append(f"loop: {a}")
        if (a[1], a[0]) in seen:
            violations.append(f"reverse-pair: {a}")
        seen.add(a)
        if a not in image:
            violations.append(f"not-surjective: arc {a} outside decisive image")
            break
    return violations


def _succ_indices(decisive: Sequence[Arc], i: int) -> list[int]:
    head = decisive[i][1]
    return [j for j, e in enumerate(decisive) if e[0] == head]


def out_set(decisive: Sequence[Arc], x: int) -> set[int]:
    """Indices of decisive arcs reachable by a decisive-arc path from x.

    A path here is a sequence of decisive arcs with matching endpoints; the
    one-arc path counts, so every arc with tail x belongs to the set.
    """
    frontier = [i for i, e in enumerate(decisive) if e[0] == x]
    seen = set(frontier)
    while frontier:
        nxt = []
        for i in frontier:
            for j in _succ_indices(decisive, i):
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return seen


def in_set(decisive: Sequence[Arc], x: int) -> set[int]:
    """Indices of decisive arcs from which a decisive-arc path reaches x."""
    frontier = [i for i, e in enumerate(decisive) if e[1] == x]
    seen = set(frontier)
    while frontier:
        nxt = []
        for i in frontier:
            tail = decisive[i][0]
            for j, e in enumerate(decisive):
                if e[1] == tail and j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return seen


def splice_position(decisive: Sequence[Arc], w: int) -> int:
    """Insertion slot for an arc ending at w: min{i : tail(e_i) = w}, else k.

    In a valid structure, consecutive decisive arcs along any path carry
    strictly increasing indices (a backward step would put a loop into the
    image), so the least Out(w) index is always realised by a one-arc path
    and a tail scan suffices.
    """
    for i, e in enumerate(decisive):
        if e[0] == w:
            return i
    return len(decisive)


def add_available_arc(
    arcs,
    decisive: Sequence[Arc],
    rank: int,
    e: Arc,
    e_applied: bool = False,
) -> tuple[list[Arc], list[Arc]]:
    """Absorb the available arc e, returning (new arcs to direct, decisive').

    Directing e plus the returned arcs keeps the digraph an alpha structure
    of rank ``rank + 1`` with e spliced into the decisive list.  At most
    min(rank, |V| - 2) arcs are returned.  ``e_applied`` tells the procedure
    that e is already part of ``arcs`` (live-board usage).
    """
    v, w = e
    if v == w:
        raise NotAvailable(f"loop {e}")
    if not e_applied:
        if e in arcs or (w, v) in arcs:
            raise NotAvailable(f"arc {e} is not available")
    ell = splice_position(decisive, w)
    new_arcs: list[Arc] = []
    seen: set[Arc] = set()
    for i, ei in enumerate(decisive):
        f = (ei[0], w) if i < ell else (v, ei[1])
        if f[0] == f[1] or f == e or f in seen:
            continue
        if f in arcs:
            continue
        if (f[1], f[0]) in arcs or (f[1], f[0]) == e:
            raise ProcedureBroken(f"reverse of forced arc {f} already directed")
        seen.add(f)
        new_arcs.append(f)
    decisive2 = list(decisive)
    decisive2.insert(ell, e)
    return new_arcs, decisive2


def restrict_decisive(arcs, decisive: Sequence[Arc], v: int) -> list[Arc]:
    """Decisive arcs for the structure induced on V minus {v}.

    Iterative per-arc case split: an arc with tail (head) at v is replaced
    by a forced arc sharing its head (tail) when one exists, kept when v is
    untouched, and dropped otherwise.  Among qualifying forced arcs the
    lexicographically least is chosen.
    """
    if all(v != e[0] and v != e[1] for e in decisive):
        return list(decisive)
    out: list[Arc] = []
    chosen: set[Arc] = set(decisive)
    for i, ei in enumerate(decisive):
        t, h = ei
        if v != t and v != h:
            out.append(ei)
            continue
        if v == t:
            # forced replacement: same head, tail borrowed from an earlier arc
            cands = []
            for s in range(i):
                g = (decisive[s][0], h)
                if g[0] != v and g[0] != g[1] and g not in chosen and g in arcs:
                    cands.append(g)
            if cands:
                g = min(cands)
                chosen.discard(ei)
                chosen.add(g)
                out.append(g)
                continue
        elif v == h:
            cands = []
            for j in range(i + 1, len(decisive)):
                g = (t, decisive[j][1])
                if g[1] != v and g[0] != g[1] and g not in chosen and g in arcs:
                    cands.append(g)
            if cands:
                g = min(cands)
                chosen.discard(ei)
                chosen.add(g)
                out.append(g)
                continue
        chosen.discard(ei)
    return out


def dual_decisive(decisive: Sequence[Arc]) -> list[Arc]:
    """Decisive arcs of the reversed digraph: each arc flipped, order reversed."""
    return [(h, t) for t, h in reversed(decisive)]
