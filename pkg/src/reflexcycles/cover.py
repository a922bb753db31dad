"""Unwinding a cycle into a path: winding numbers, cover windows and lifts.

The cover of an n-cycle ``G`` at gate vertex ``a`` has vertices
``(x, level)``.  Arcs inside a level copy those of ``G`` except on the gate
edge ``{a-1, a}``, which instead climbs from level ``i`` at ``a-1`` to level
``i+1`` at ``a``.  Projecting the level away is a homomorphism onto ``G``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .digraph import Digraph, DigraphError, as_cycle, bits, cycle_of_word, induced_subpaths, product_of_words
from .homsearch import HomSearch, Homomorphism, surjective_product_onto_path, surjective_prune


def _check_walk(g: Digraph, walk: Sequence[int]) -> None:
    for u, v in zip(walk, walk[1:]):
        if u != v and not (g.has_arc(u, v) or g.has_arc(v, u)):
            raise DigraphError(f"walk step {u} -> {v} is not an edge")


def winding_number(g: Digraph, a: int, walk: Sequence[int]) -> int:
    """Signed count of gate crossings: +1 per step ``a-1 -> a``, -1 per step ``a -> a-1``."""
    _check_walk(g, walk)
    gate_lo = (a - 1) % g.n
    total = 0
    for u, v in zip(walk, walk[1:]):
        if u == gate_lo and v == a:
            total += 1
        elif u == a and v == gate_lo:
            total -= 1
    return total


@dataclass(frozen=True)
class CoverWindow:
    """Levels ``-L..L`` of the cover; vertex ``(x, i)`` has index ``(i + L) * n + x``."""

    base: Digraph
    gate: int
    levels: int
    graph: Digraph

    def index(self, x: int, level: int) -> int:
        if not -self.levels <= level <= self.levels:
            raise DigraphError(f"level {level} outside window")
        return (level + self.levels) * self.base.n + x

    def label(self, v: int) -> tuple[int, int]:
        level, x = divmod(v, self.base.n)
        return x, level - self.levels

    def project(self, v: int) -> int:
        return v % self.base.n

    def path_order(self) -> list[int]:
        """Window vertices in line order, from ``(a, -L)`` to ``(a-1, L)``."""
        n, a = self.base.n, self.gate
        return [
            self.index((a + t) % n, lvl)
            for lvl in range(-self.levels, self.levels + 1)
            for t in range(n)
        ]


def cover_window(g: Digraph, a: int = 0, levels: int = 1) -> CoverWindow:
    n = g.n
    if not 0 <= a < n:
        raise DigraphError("gate vertex out of range")
    if levels < 0:
        raise DigraphError("levels must be non-negative")
    lo = (a - 1) % n
    m = 2 * levels + 1
    arcs = []
    for i in range(m):
        for x, y in g.arcs():
            if {x, y} != {lo, a} or x == y:
                arcs.append((i * n + x, i * n + y))
        if i + 1 < m:
            if g.has_arc(lo, a):
                arcs.append((i * n + lo, (i + 1) * n + a))
            if g.has_arc(a, lo):
                arcs.append(((i + 1) * n + a, i * n + lo))
    labels = [(v % n, v // n - levels) for v in range(n * m)]
    win = Digraph.from_arcs(n * m, arcs, labels=labels)
    return CoverWindow(g, a, levels, win)


@dataclass(frozen=True)
class Lift:
    """A homomorphism into a cover window together with the level of each vertex."""

    window: CoverWindow
    hom: Homomorphism
    levels: tuple[int, ...]


class LiftFailure(Exception):
    """Raised by :func:`lift_or_explain` when the level function is inconsistent."""

    def __init__(self, arc: tuple[int, int], levels: tuple[int, int], winding: int):
        super().__init__(
            f"no lift (nonzero winding): arc {arc} joins levels {levels[0]} and {levels[1]},"
            f" closing a loop of winding {winding}"
        )
        self.arc = arc
        self.winding = winding


def lift(
    k: Digraph,
    f: Homomorphism,
    u: int = 0,
    gate: int = 0,
    levels: Optional[int] = None,
) -> Optional[Lift]:
    """Lift ``f: k -> G`` (G a cycle) through the cover, or None if no lift exists.

    Levels are winding numbers of the images of breadth-first tree walks
    from ``u``; the result is then checked arc by arc.  A failed check means
    some closed walk in ``k`` maps to a loop of nonzero winding.
    """
    try:
        return lift_or_explain(k, f, u, gate, levels)
    except LiftFailure:
        return None


def lift_or_explain(
    k: Digraph,
    f: Homomorphism,
    u: int = 0,
    gate: int = 0,
    levels: Optional[int] = None,
) -> Lift:
    if f.source is not k and f.source != k:
        raise DigraphError("homomorphism source does not match")
    g = f.target
    if not k.is_connected():
        raise DigraphError("lifting needs a connected source")
    n = g.n
    lo = (gate - 1) % n
    lvl = [None] * k.n
    lvl[u] = 0
    queue = deque([u])
    while queue:
        v = queue.popleft()
        for w in bits(k.nbrs[v]):
            if lvl[w] is None:
                fv, fw = f[v], f[w]
                lvl[w] = lvl[v] + (1 if (fv, fw) == (lo, gate) else -1 if (fv, fw) == (gate, lo) else 0)
                queue.append(w)
    if levels is None:
        levels = k.n
    win = cover_window(g, gate, levels)
    assignment = tuple(win.index(f[v], lvl[v]) for v in range(k.n))
    for v, w in k.arcs():
        if not win.graph.has_arc(assignment[v], assignment[w]):
            fv, fw = f[v], f[w]
            step = 1 if (fv, fw) == (lo, gate) else -1 if (fv, fw) == (gate, lo) else 0
            raise LiftFailure((v, w), (lvl[v], lvl[w]), lvl[v] + step - lvl[w])
    return Lift(win, Homomorphism(k, win.graph, assignment), tuple(lvl))


def surjective_product_onto_cycle(qs: Sequence[str], c, method: str = "inclusion") -> bool:
    """Does the product of the paths P(q) map onto the cycle?

    Decided through the spanning paths of the cycle: the product maps onto
    the cycle exactly when it maps onto one of them.
    """
    cid = as_cycle(c)
    targets = sorted(set(induced_subpaths(cid, cid.girth - 1)))
    return any(surjective_product_onto_path(qs, p, method=method) for p in targets)


def onto_cycle_oracle(qs: Sequence[str], c) -> bool:
    """Exhaustive onto search straight into the cycle (no reduction); tiny inputs only."""
    cid = as_cycle(c)
    g = cycle_of_word(cid.canonical_word)
    k = product_of_words(sorted(set(qs)))
    search = HomSearch(k, g)
    doms = search.initial_domains()
    if doms is None:
        return False
    for _ in search.solutions(doms, prune=surjective_prune(search)):
        return True
    return False
