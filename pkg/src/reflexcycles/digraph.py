"""Finite reflexive digraphs, with paths and cycles built from words."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Iterator, Optional, Sequence

from .words import WordError, all_words, check_word, dual, rotations


class DigraphError(ValueError):
    pass


class Digraph:
    """Reflexive digraph on vertices ``0..n-1`` with one out-neighbour bitset per vertex.

    Loops are always present; they are added on construction if missing.
    ``labels`` optionally names vertices (tuples for products, pairs for cover
    windows) and ``radices`` records the factor sizes of a product.
    """

    __slots__ = ("n", "out", "labels", "radices", "__dict__")

    def __init__(
        self,
        n: int,
        out: Sequence[int],
        labels: Optional[Sequence] = None,
        radices: Optional[tuple[int, ...]] = None,
    ):
        if n < 1:
            raise DigraphError("a digraph needs at least one vertex")
        if len(out) != n:
            raise DigraphError("one out-neighbour mask per vertex is required")
        full = (1 << n) - 1
        self.n = n
        self.out = tuple((m & full) | (1 << v) for v, m in enumerate(out))
        self.labels = tuple(labels) if labels is not None else None
        self.radices = radices

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], **kw) -> "Digraph":
        out = [0] * n
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise DigraphError(f"arc ({u}, {v}) out of range")
            out[u] |= 1 << v
        return cls(n, out, **kw)

    @cached_property
    def inn(self) -> tuple[int, ...]:
        inn = [0] * self.n
        for u, m in enumerate(self.out):
            for v in _bits(m):
                inn[v] |= 1 << u
        return tuple(inn)

    @cached_property
    def both(self) -> tuple[int, ...]:
        """Per vertex, the neighbours joined to it by arcs in both directions."""
        return tuple(o & i for o, i in zip(self.out, self.inn))

    @cached_property
    def nbrs(self) -> tuple[int, ...]:
        """Underlying undirected adjacency, loops removed."""
        return tuple((o | i) & ~(1 << v) for v, (o, i) in enumerate(zip(self.out, self.inn)))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u, m in enumerate(self.out):
            for v in _bits(m):
                yield u, v

    def arc_count(self) -> int:
        return sum(bin(m).count("1") for m in self.out)

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.nbrs[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        idx = {v: i for i, v in enumerate(vertices)}
        out = []
        for v in vertices:
            m = 0
            for w in _bits(self.out[v]):
                if w in idx:
                    m |= 1 << idx[w]
            out.append(m)
        return Digraph(len(vertices), out)

    def decode(self, v: int) -> tuple[int, ...]:
        """Coordinates of a product vertex (first factor most significant)."""
        if self.radices is None:
            raise DigraphError("not a product digraph")
        coords = []
        for r in reversed(self.radices):
            v, c = divmod(v, r)
            coords.append(c)
        return tuple(reversed(coords))

    def encode(self, coords: Sequence[int]) -> int:
        if self.radices is None:
            raise DigraphError("not a product digraph")
        v = 0
        for c, r in zip(coords, self.radices):
            v = v * r + c
        return v

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.out == other.out

    def __hash__(self) -> int:
        return hash((self.n, self.out))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arc_count()})"


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def bits(m: int) -> list[int]:
    return list(_bits(m))


def _add_letter(out: list[int], i: int, j: int, c: str) -> None:
    if c in "+*":
        out[i] |= 1 << j
    if c in "-*":
        out[j] |= 1 << i


def path_of_word(w: str) -> Digraph:
    check_word(w)
    k = len(w)
    out = [0] * (k + 1)
    for i, c in enumerate(w):
        _add_letter(out, i, i + 1, c)
    return Digraph(k + 1, out)


def _edge_letter(g: Digraph, i: int, j: int) -> Optional[str]:
    fwd, bwd = g.has_arc(i, j), g.has_arc(j, i)
    if fwd and bwd:
        return "*"
    if fwd:
        return "+"
    if bwd:
        return "-"
    return None


def word_of_path(p: Digraph) -> str:
    """Read the word of a path whose vertices are numbered in line order."""
    letters = []
    for i in range(p.n - 1):
        c = _edge_letter(p, i, i + 1)
        if c is None:
            raise DigraphError(f"vertices {i} and {i + 1} are not adjacent")
        letters.append(c)
    for v in range(p.n):
        allowed = 0
        if v > 0:
            allowed |= 1 << (v - 1)
        if v + 1 < p.n:
            allowed |= 1 << (v + 1)
        if p.nbrs[v] & ~allowed:
            raise DigraphError(f"vertex {v} has a neighbour off the line")
    return "".join(letters)


def cycle_of_word(w: str) -> Digraph:
    """The cycle C(w): letter ``t`` (0-indexed) governs vertices ``t`` and ``t+1 mod n``."""
    check_word(w)
    n = len(w)
    if n < 3:
        raise WordError("a cycle needs at least 3 letters")
    out = [0] * n
    for t, c in enumerate(w):
        _add_letter(out, t, (t + 1) % n, c)
    return Digraph(n, out)


def cycle_order(g: Digraph) -> list[int]:
    """Vertices of a cycle digraph in cyclic order starting at 0 towards its smaller neighbour."""
    if g.n < 3 or any(bin(m).count("1") != 2 for m in g.nbrs):
        raise DigraphError("not a cycle: every vertex needs exactly two neighbours")
    order = [0]
    prev, cur = 0, min(bits(g.nbrs[0]))
    while cur != 0:
        order.append(cur)
        a, b = bits(g.nbrs[cur])
        prev, cur = cur, (b if a == prev else a)
        if len(order) > g.n:
            break
    if len(order) != g.n:
        raise DigraphError("not a cycle: underlying graph is disconnected")
    return order


def word_of_cycle(g: Digraph) -> str:
    order = cycle_order(g)
    n = len(order)
    return "".join(_edge_letter(g, order[t], order[(t + 1) % n]) for t in range(n))


def product(factors: Sequence[Digraph]) -> Digraph:
    """Categorical product; vertices are mixed-radix codes of coordinate tuples."""
    if not factors:
        raise DigraphError("product needs at least one factor")
    radices = tuple(f.n for f in factors)
    total = prod(radices)
    # build row by row: out-set of (x1..xk) is the product of out-sets
    rows = [1]
    size = 1
    for f in factors:
        new_rows = []
        for r in rows:
            for x in range(f.n):
                m = 0
                for y in _bits(f.out[x]):
                    m |= _spread(r, size, f.n, y)
                new_rows.append(m)
        rows = new_rows
        size *= f.n
    assert len(rows) == total
    return Digraph(total, rows, radices=radices)


def _spread(mask: int, size: int, radix: int, digit: int) -> int:
    # {a * radix + digit : a in mask}
    out = 0
    for a in _bits(mask):
        out |= 1 << (a * radix + digit)
    return out


def product_of_words(words: Sequence[str]) -> Digraph:
    return product([path_of_word(w) for w in words])


@dataclass(frozen=True, order=True)
class CycleId:
    """A reflexive cycle up to isomorphism, named by its least representing word.

    ``girth`` is the number of vertices of the cycle.
    """

    canonical_word: str
    girth: int

    @property
    def graph(self) -> Digraph:
        return cycle_of_word(self.canonical_word)

    def __str__(self) -> str:
        return self.canonical_word


def representations(w: str) -> list[str]:
    """All ``2n`` words naming the cycle C(w): rotations of w, then rotations of its dual."""
    return rotations(w) + rotations(dual(w))


def canonical_cycle(w: str) -> CycleId:
    check_word(w)
    if len(w) < 3:
        raise WordError("a cycle needs at least 3 letters")
    return CycleId(min(representations(w)), len(w))


def as_cycle(c) -> CycleId:
    return c if isinstance(c, CycleId) else canonical_cycle(c)


def orbit_size(w: str) -> int:
    return len(set(representations(w)))


def enumerate_cycles(n: int) -> list[CycleId]:
    """Every reflexive n-cycle once, in lexicographic order of canonical words."""
    if n < 3:
        raise WordError("cycles have at least 3 vertices")
    out = []
    for w in all_words(n):
        # all_words yields in the same letter order as string comparison
        if w == min(representations(w)):
            out.append(CycleId(w, n))
    out.sort()
    return out


def induced_subpaths(c, length: int) -> list[str]:
    """Words of the subpaths of the cycle with ``length`` edges, read both ways.

    For ``length <= n - 2`` these are the induced subpaths on ``length + 1``
    consecutive vertices.  For ``length == n - 1`` they are the spanning
    paths left after deleting one edge.  The result lists ``2n`` words (a
    multiset); it is closed under :func:`dual`.
    """
    cid = as_cycle(c)
    w, n = cid.canonical_word, cid.girth
    if length < 0 or length >= n:
        raise WordError(f"subpath length must lie in 0..{n - 1}, got {length}")
    g = cycle_of_word(w)
    ww = w + w
    out = []
    for i in range(n):
        q = ww[i : i + length]
        if length <= n - 2:
            window = [(i + t) % n for t in range(length + 1)]
            sub = g.induced(window)
            assert word_of_path(sub) == q
        out.append(q)
    out += [dual(q) for q in out]
    return out


def automorphisms(g: Digraph) -> list[tuple[int, ...]]:
    """Arc-preserving permutations of a cycle digraph, from the 2n dihedral candidates."""
    order = cycle_order(g)
    n = len(order)
    found = []
    for shift in range(n):
        for step in (1, -1):
            perm = [0] * n
            for t in range(n):
                perm[order[t]] = order[(shift + step * t) % n]
            if all(g.has_arc(perm[u], perm[v]) for u, v in g.arcs()):
                found.append(tuple(perm))
    return sorted(set(found))


def find_embeddings(h: Digraph, g: Digraph) -> list[tuple[int, ...]]:
    """All injective maps from ``h`` onto induced subdigraphs of ``g`` isomorphic to ``h``."""
    n = h.n
    order = _bfs_order(h)
    pos = {v: i for i, v in enumerate(order)}
    results: list[tuple[int, ...]] = []
    assign = [-1] * n

    def consistent(v: int, x: int) -> bool:
        for w in range(n):
            y = assign[w]
            if y < 0 or w == v:
                continue
            if h.has_arc(v, w) != g.has_arc(x, y) or h.has_arc(w, v) != g.has_arc(y, x):
                return False
        return True

    def extend(i: int, used: int) -> None:
        if i == n:
            results.append(tuple(assign))
            return
        v = order[i]
        cand = (1 << g.n) - 1
        for w in _bits(h.nbrs[v]):
            if pos[w] < i:
                cand &= g.nbrs[assign[w]]
        cand &= ~used
        for x in _bits(cand):
            if consistent(v, x):
                assign[v] = x
                extend(i + 1, used | (1 << x))
                assign[v] = -1

    extend(0, 0)
    return sorted(results)


def _bfs_order(h: Digraph) -> list[int]:
    order = []
    seen = 0
    for root in range(h.n):
        if seen >> root & 1:
            continue
        seen |= 1 << root
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in _bits(h.nbrs[v] & ~seen):
                seen |= 1 << w
                queue.append(w)
    return order


def to_dot(g: Digraph, name: str = "G", loops: bool = False) -> str:
    """Graphviz text; a symmetric pair becomes one edge with ``dir=both``."""
    lines = [f"digraph {name} {{"]
    for v in range(g.n):
        label = g.labels[v] if g.labels is not None else v
        lines.append(f'  {v} [label="{_dot_label(label)}"];')
    for u, v in g.arcs():
        if u == v:
            if loops:
                lines.append(f"  {u} -> {v};")
            continue
        if g.has_arc(v, u):
            if u < v:
                lines.append(f"  {u} -> {v} [dir=both];")
        else:
            lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_label(label) -> str:
    if isinstance(label, tuple):
        return ",".join(str(x) for x in label)
    return str(label)
