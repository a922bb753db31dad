"""Homomorphism search between reflexive digraphs and the word languages they carry.

Search uses bitset domains with arc-consistency (AC-3) after every
assignment, smallest-domain-first variable order and ascending values.
"""
from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Callable, Iterator, Mapping, Optional, Sequence

from .digraph import Digraph, DigraphError, bits, path_of_word, product, product_of_words, word_of_path
from .words import MINUS, PLUS, dual


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


class DisagreementError(AssertionError):
    """Two independent decision routes returned different answers."""


@dataclass(frozen=True)
class Homomorphism:
    source: Digraph
    target: Digraph
    assignment: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def is_valid(self) -> bool:
        a = self.assignment
        return all(self.target.has_arc(a[u], a[v]) for u, v in self.source.arcs())

    def is_onto(self) -> bool:
        return len(set(self.assignment)) == self.target.n


class _Supports:
    """Cached support sets: for a mask D, the vertices with an out-arc (or in-arc) into D."""

    def __init__(self, target: Digraph):
        self.target = target
        self._pre: dict[int, int] = {}
        self._post: dict[int, int] = {}

    def pre(self, d: int) -> int:
        # {a : some arc a -> b with b in d}
        r = self._pre.get(d)
        if r is None:
            r = 0
            inn = self.target.inn
            for b in bits(d):
                r |= inn[b]
            self._pre[d] = r
        return r

    def post(self, d: int) -> int:
        # {b : some arc a -> b with a in d}
        r = self._post.get(d)
        if r is None:
            r = 0
            out = self.target.out
            for a in bits(d):
                r |= out[a]
            self._post[d] = r
        return r


class HomSearch:
    """Backtracking search for homomorphisms ``source -> target``.

    ``prune`` is an optional extra test on the domains after propagation;
    returning False cuts the branch.  ``nodes`` counts search nodes.
    Exceeding ``node_limit`` or passing ``deadline`` raises
    :class:`SearchBudgetExceeded`.
    """

    def __init__(
        self,
        source: Digraph,
        target: Digraph,
        node_limit: Optional[int] = None,
        deadline: Optional[float] = None,
    ):
        self.source = source
        self.target = target
        self.node_limit = node_limit
        self.deadline = deadline  # time.monotonic() value
        self.nodes = 0
        self.sup = _Supports(target)
        n = source.n
        self.succ = [bits(source.out[v] & ~(1 << v)) for v in range(n)]
        self.pred = [bits(source.inn[v] & ~(1 << v)) for v in range(n)]
        self.nbrs = [bits(source.nbrs[v]) for v in range(n)]

    def initial_domains(self, pins: Optional[Mapping[int, int]] = None) -> Optional[list[int]]:
        full = (1 << self.target.n) - 1
        doms = [full] * self.source.n
        changed = []
        for v, x in (pins or {}).items():
            if not (0 <= v < self.source.n and 0 <= x < self.target.n):
                raise DigraphError(f"pin {v}->{x} out of range")
            doms[v] &= 1 << x
            if not doms[v]:
                return None
            changed.append(v)
        if not self.propagate(doms, changed or range(self.source.n)):
            return None
        return doms

    def propagate(self, doms: list[int], changed) -> bool:
        pre, post = self.sup.pre, self.sup.post
        queue = deque(changed)
        queued = set(queue)
        succ, pred = self.succ, self.pred
        while queue:
            v = queue.popleft()
            queued.discard(v)
            dv = doms[v]
            p, q = pre(dv), post(dv)
            # v's successors must have a pre-image in D(v); predecessors an image
            for w in succ[v]:
                nd = doms[w] & q
                if nd != doms[w]:
                    if not nd:
                        return False
                    doms[w] = nd
                    if w not in queued:
                        queue.append(w)
                        queued.add(w)
            for w in pred[v]:
                nd = doms[w] & p
                if nd != doms[w]:
                    if not nd:
                        return False
                    doms[w] = nd
                    if w not in queued:
                        queue.append(w)
                        queued.add(w)
        return True

    def tick(self) -> None:
        """Count one search node, enforcing the budgets."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise SearchBudgetExceeded(self.nodes)
        if self.deadline is not None and not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise SearchBudgetExceeded(self.nodes)

    def solutions(
        self,
        doms: list[int],
        prune: Optional[Callable[[list[int]], bool]] = None,
        rng: Optional[random.Random] = None,
    ) -> Iterator[tuple[int, ...]]:
        # explicit stack: sources can have thousands of vertices
        stack = [self._expand(doms, prune, rng)]
        while stack:
            frame = stack[-1]
            if frame is None:
                stack.pop()
                continue
            if isinstance(frame, tuple):
                stack.pop()
                yield frame
                continue
            d, best, values = frame
            if not values:
                stack.pop()
                continue
            x = values.pop()
            child = list(d)
            child[best] = 1 << x
            if self.propagate(child, [best]):
                stack.append(self._expand(child, prune, rng))

    def _expand(self, doms, prune, rng):
        """Count a node; return None (dead), a solution tuple, or a branching frame."""
        self.tick()
        if prune is not None and not prune(doms):
            return None
        best, best_size = -1, 1 << 30
        for v, d in enumerate(doms):
            if d & (d - 1):
                s = bin(d).count("1")
                if s < best_size:
                    best, best_size = v, s
                    if s == 2:
                        break
        if best < 0:
            return tuple(d.bit_length() - 1 for d in doms)
        values = bits(doms[best])
        if rng is not None:
            rng.shuffle(values)
        # popped from the end, so reverse to try ascending
        values.reverse()
        return [doms, best, values]


def surjective_prune(search: HomSearch) -> Callable[[list[int]], bool]:
    """Prune for onto searches: every target value needs a variable that can take it.

    A value with a single candidate variable is forced there, and the
    forcing is propagated.  Mutates the domains it is given.
    """
    full = (1 << search.target.n) - 1

    def prune(doms: list[int]) -> bool:
        # each value needs a variable that can take it; a sole candidate is forced
        while True:
            seen = 0
            twice = 0
            for d in doms:
                twice |= seen & d
                seen |= d
            if seen != full:
                return False
            once = full & ~twice
            forced = []
            for v, d in enumerate(doms):
                u = d & once
                if u and d & (d - 1):
                    if u & (u - 1):
                        return False  # sole candidate for two values
                    doms[v] = u
                    forced.append(v)
            if not forced:
                return True
            if not search.propagate(doms, forced):
                return False

    return prune


def hom_search(
    k: Digraph,
    h: Digraph,
    pins: Optional[Mapping[int, int]] = None,
    node_limit: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> Optional[Homomorphism]:
    """A homomorphism ``k -> h`` extending ``pins``, or None.

    Deterministic unless ``rng`` is given, in which case the value order is
    shuffled (used to sample varied homomorphisms in tests).
    """
    search = HomSearch(k, h, node_limit)
    doms = search.initial_domains(pins)
    if doms is None:
        return None
    for sol in search.solutions(doms, rng=rng):
        return Homomorphism(k, h, sol)
    return None


def step(g: Digraph, mask: int, letter: str) -> int:
    """Vertices reachable from ``mask`` by one letter."""
    table = g.out if letter == PLUS else g.inn if letter == MINUS else g.both
    r = 0
    for v in bits(mask):
        r |= table[v]
    return r


def reach_mask(g: Digraph, x: int, w: str) -> int:
    cur = 1 << x
    for c in w:
        cur = step(g, cur, c)
    return cur


def reach(g: Digraph, x: int, w: str) -> set[int]:
    """All ``y`` with ``x W y``: some homomorphism P(W) -> g sends 0 to x and |W| to y."""
    if not 0 <= x < g.n:
        raise DigraphError(f"vertex {x} out of range")
    return set(bits(reach_mask(g, x, w)))


class WordAutomaton:
    """Nondeterministic automaton over ``+ - *`` whose states are digraph vertices.

    A ``+`` move follows an arc forwards, ``-`` backwards, and ``*`` needs
    arcs both ways.  It accepts exactly the words ``W`` with ``start W accept``.
    """

    def __init__(self, g: Digraph, start: int, accept: int):
        self.graph = g
        self.start = start
        self.accept = accept

    def delta(self, states: int, letter: str) -> int:
        return step(self.graph, states, letter)

    def accepts(self, w: str) -> bool:
        cur = 1 << self.start
        for c in w:
            cur = self.delta(cur, c)
            if not cur:
                return False
        return bool(cur >> self.accept & 1)

    def determinize(self) -> tuple[dict[int, dict[str, int]], int]:
        """Subset construction from the start state; returns (transitions, start)."""
        start = 1 << self.start
        trans: dict[int, dict[str, int]] = {}
        todo = [start]
        while todo:
            s = todo.pop()
            if s in trans:
                continue
            trans[s] = {c: self.delta(s, c) for c in "+-*"}
            todo.extend(t for t in trans[s].values() if t not in trans)
        return trans, start


def word_language_automaton(g: Digraph, x: int, y: int) -> WordAutomaton:
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise DigraphError("automaton endpoints out of range")
    return WordAutomaton(g, x, y)


@dataclass(frozen=True)
class SeparatingWord:
    """A word ``W`` with ``x W y`` in the source but not ``g(x) W g(y)`` in the path."""

    x: int
    y: int
    word: str


def _check_path(p: Digraph) -> str:
    try:
        return word_of_path(p)
    except DigraphError as exc:
        raise DigraphError(f"target is not a path: {exc}") from None


def separating_word(k: Digraph, pins: Mapping[int, int], p: Digraph) -> Optional[SeparatingWord]:
    """Search for a word refuting the pinned extension to the path ``p``.

    For each pinned ``x``, explores pairs (vertex of k, subset of p) from
    ``(x, {g(x)})``; the subset side is the determinised path automaton.
    Breadth-first, so the word returned is a shortest one.
    """
    _check_path(p)
    pinned = dict(pins)
    for x in sorted(pinned):
        start = (x, 1 << pinned[x])
        parent: dict[tuple[int, int], tuple[tuple[int, int], str]] = {}
        seen = {start}
        queue = deque([start])
        while queue:
            state = queue.popleft()
            v, s = state
            if v in pinned and not s >> pinned[v] & 1:
                letters = []
                cur = state
                while cur != start:
                    cur, c = parent[cur]
                    letters.append(c)
                return SeparatingWord(x, v, "".join(reversed(letters)))
            for c in "+-*":
                s2 = step(p, s, c)
                for v2 in bits(step(k, 1 << v, c)):
                    nxt = (v2, s2)
                    if nxt not in seen:
                        seen.add(nxt)
                        parent[nxt] = (state, c)
                        queue.append(nxt)
    return None


def extension_exists_to_path(
    k: Digraph, pins: Mapping[int, int], p: Digraph, method: str = "both"
) -> bool:
    """Does a homomorphism ``k -> p`` restricting to ``pins`` exist?

    ``method`` is ``"search"`` (backtracking), ``"inclusion"`` (word
    language inclusion per pinned pair) or ``"both"``, which runs the two
    and raises :class:`DisagreementError` if they differ.
    """
    _check_path(p)
    if method not in ("search", "inclusion", "both"):
        raise ValueError(f"unknown method {method!r}")
    a = b = None
    if method in ("search", "both"):
        a = hom_search(k, p, pins) is not None
    if method in ("inclusion", "both"):
        b = separating_word(k, pins, p) is None
    if method == "both" and a != b:
        raise DisagreementError(f"search says {a}, inclusion says {b}")
    return a if a is not None else b


def _path_dfa_step(word: str):
    g = path_of_word(word)
    cache: dict[tuple[int, str], int] = {}

    def f(s: int, c: str) -> int:
        key = (s, c)
        r = cache.get(key)
        if r is None:
            r = cache[key] = step(g, s, c)
        return r

    return f


def product_separating_word(qs: Sequence[str], p: str) -> Optional[str]:
    """A word ``W`` with ``W >= q`` for every q in ``qs`` but ``W >= p`` false, or None.

    Works on the product of the determinised path automata, so the product
    digraph of the factors is never built.
    """
    steps = [_path_dfa_step(q) for q in qs]
    pstep = _path_dfa_step(p)
    ends = [1 << len(q) for q in qs]
    pend = 1 << len(p)
    start = (tuple(1 for _ in qs), 1)
    parent: dict = {}
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        ss, sp = state
        if all(s & e for s, e in zip(ss, ends)) and not sp & pend:
            letters = []
            cur = state
            while cur != start:
                cur, c = parent[cur]
                letters.append(c)
            return "".join(reversed(letters))
        for c in "+-*":
            nxt = (tuple(f(s, c) for f, s in zip(steps, ss)), pstep(sp, c))
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = (state, c)
                queue.append(nxt)
    return None


def _flip_families(qs: Sequence[str]) -> list[tuple[str, ...]]:
    fams = set()
    for flips in iproduct((False, True), repeat=len(qs)):
        fams.add(tuple(sorted(dual(q) if f else q for q, f in zip(qs, flips))))
    return sorted(fams)


def surjective_product_onto_path(
    qs: Sequence[str], p: str, method: str = "inclusion", flips: Optional[bool] = None
) -> bool:
    """Is there a homomorphism from the product of the paths P(q) onto P(p)?

    The all-starts corner is pinned to 0 and the all-ends corner to ``len(p)``;
    onto-ness follows because the product is connected.  With ``flips`` the
    factors are also tried in every orientation; by default flips are used
    only when ``qs`` is not closed under duals.
    """
    qs = tuple(sorted(set(qs)))
    if flips is None:
        flips = set(qs) != {dual(q) for q in qs}
    families = _flip_families(qs) if flips else [qs]
    for fam in families:
        if _onto_path_pinned(fam, p, method):
            return True
    return False


def _onto_path_pinned(qs: Sequence[str], p: str, method: str) -> bool:
    if not qs:
        return len(p) == 0
    if method == "inclusion":
        return product_separating_word(qs, p) is None
    if method == "automaton":
        k = product_of_words(qs)
        pins = {0: 0, k.n - 1: len(p)}
        return separating_word(k, pins, path_of_word(p)) is None
    if method == "search":
        k = product_of_words(qs)
        pins = {0: 0, k.n - 1: len(p)}
        return hom_search(k, path_of_word(p), pins) is not None
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class OperationTable:
    """A k-ary operation on ``0..n-1`` stored densely.

    Entry ``i`` of ``table`` is the value at the argument tuple whose
    mixed-radix code is ``i`` (first argument most significant), matching
    vertex codes of :func:`~reflexcycles.digraph.product`.
    """

    arity: int
    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        if len(self.table) != self.n**self.arity:
            raise ValueError("table size must be n ** arity")
        if any(not 0 <= x < self.n for x in self.table):
            raise ValueError("table entry out of range")

    @classmethod
    def from_function(cls, n: int, arity: int, fn: Callable[..., int]) -> "OperationTable":
        return cls(arity, n, tuple(fn(*args) for args in iproduct(range(n), repeat=arity)))

    @classmethod
    def projection(cls, n: int, arity: int, i: int) -> "OperationTable":
        """Projection onto coordinate ``i`` (1-indexed)."""
        return cls.from_function(n, arity, lambda *a: a[i - 1])

    @classmethod
    def constant(cls, n: int, arity: int, c: int) -> "OperationTable":
        return cls(arity, n, (c,) * n**arity)

    def __call__(self, *args: int) -> int:
        i = 0
        for a in args:
            i = i * self.n + a
        return self.table[i]

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.n

    def to_json(self) -> dict:
        return {"arity": self.arity, "radices": [self.n] * self.arity, "table": list(self.table)}

    @classmethod
    def from_json(cls, obj: dict) -> "OperationTable":
        radices = obj["radices"]
        return cls(obj["arity"], radices[0] if radices else 1, tuple(obj["table"]))


def power(g: Digraph, k: int) -> Digraph:
    return product([g] * k)


def is_polymorphism(f: OperationTable, g: Digraph) -> bool:
    if f.n != g.n:
        return False
    gk = power(g, f.arity)
    t = f.table
    return all(g.has_arc(t[s], t[u]) for s, u in gk.arcs())


def is_essentially_unary(f: OperationTable) -> Optional[tuple[int, tuple[int, ...]]]:
    """``(i, g)`` with ``f(x1..xk) = g(xi)`` (``i`` 1-indexed, first match), or None."""
    n, k = f.n, f.arity
    diag = tuple(f(*([x] * k)) for x in range(n))
    for i in range(k):
        stride = n ** (k - 1 - i)
        if all(f.table[s] == diag[(s // stride) % n] for s in range(len(f.table))):
            return i + 1, diag
    return None


def onto_path_oracle(qs: Sequence[str], p: str) -> bool:
    """Brute-force onto test: enumerate every homomorphism product -> P(p).

    Exponential; for tiny instances only.  Independent of the pinning
    argument used by :func:`surjective_product_onto_path`.
    """
    k = product_of_words(sorted(set(qs)))
    target = path_of_word(p)
    search = HomSearch(k, target)
    doms = search.initial_domains()
    if doms is None:
        return False
    for _ in search.solutions(doms, prune=surjective_prune(search)):
        return True
    return False


__all__ = [
    "DisagreementError",
    "HomSearch",
    "Homomorphism",
    "OperationTable",
    "SearchBudgetExceeded",
    "SeparatingWord",
    "WordAutomaton",
    "extension_exists_to_path",
    "hom_search",
    "is_essentially_unary",
    "is_polymorphism",
    "onto_path_oracle",
    "power",
    "product_separating_word",
    "reach",
    "reach_mask",
    "separating_word",
    "step",
    "surjective_product_onto_path",
    "surjective_prune",
    "word_language_automaton",
]
