from collections import Counter
from itertools import permutations, product as iproduct

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import canon_ref, cycle_arcs, cycle_count_ref, path_arcs
from reflexcycles.digraph import (
    CycleId,
    Digraph,
    DigraphError,
    automorphisms,
    canonical_cycle,
    cycle_of_word,
    enumerate_cycles,
    find_embeddings,
    induced_subpaths,
    orbit_size,
    path_of_word,
    product,
    product_of_words,
    to_dot,
    word_of_cycle,
    word_of_path,
)
from reflexcycles.words import WordError, all_words, dual, height


def test_path_example():
    p = path_of_word("-*++-")
    assert p.n == 6
    for a in [(1, 0), (1, 2), (2, 1), (2, 3), (3, 4), (5, 4)]:
        assert p.has_arc(*a)
    assert set(p.arcs()) == path_arcs("-*++-")


def test_trivial_paths():
    p = path_of_word("")
    assert p.n == 1 and set(p.arcs()) == {(0, 0)}
    assert word_of_path(p) == ""
    s = path_of_word("*")
    assert s.n == 2 and s.arc_count() == 4


@given(st.text(alphabet="+-*", max_size=10))
def test_path_roundtrip(w):
    assert word_of_path(path_of_word(w)) == w
    assert set(path_of_word(w).arcs()) == path_arcs(w)


def test_word_of_path_rejects_non_path():
    with pytest.raises(DigraphError):
        word_of_path(cycle_of_word("***"))
    with pytest.raises(DigraphError):
        word_of_path(Digraph(2, [0, 0]))


def test_loops_added():
    g = Digraph(3, [0b010, 0, 0])
    assert all(g.has_arc(v, v) for v in range(3))


def test_cycle_examples():
    g = cycle_of_word("+*+-**")
    assert g.n == 6 and set(g.arcs()) == cycle_arcs("+*+-**")
    sym = cycle_of_word("*" * 4)
    assert sym.arc_count() == 4 + 8
    almost = cycle_of_word("****+")
    asym = [(u, v) for u, v in almost.arcs() if u != v and not almost.has_arc(v, u)]
    assert len(asym) == 1
    with pytest.raises(WordError):
        cycle_of_word("+-")


@given(st.text(alphabet="+-*", min_size=3, max_size=9))
def test_cycle_word_names_same_cycle(w):
    assert canonical_cycle(word_of_cycle(cycle_of_word(w))) == canonical_cycle(w)


def test_product_examples():
    g = cycle_of_word("+*-")
    one = Digraph(1, [0])
    assert product([one, g]).out == g.out
    sq = product_of_words(["*", "*"])
    assert sq.n == 4 and sq.arc_count() == 16


def test_product_arcs_match_definition():
    ws = ["+-", "*", "-+*"]
    g = product_of_words(ws)
    arcsets = [path_arcs(w) for w in ws]
    for u in range(g.n):
        for v in range(g.n):
            cu, cv = g.decode(u), g.decode(v)
            want = all((a, b) in s for a, b, s in zip(cu, cv, arcsets))
            assert g.has_arc(u, v) == want
    assert g.encode(g.decode(17)) == 17


def test_induced_subpaths_example():
    got = Counter(induced_subpaths("****+", 3))
    want = Counter(["***", "***", "**+", "*+*", "+**", "***", "***", "-**", "*-*", "**-"])
    assert got == want
    for n in range(4, 8):
        assert set(induced_subpaths("*" * n, n - 2)) == {"*" * (n - 2)}
    with pytest.raises(WordError):
        induced_subpaths("****+", 5)


def test_induced_subpaths_are_induced():
    for cid in enumerate_cycles(6):
        g = cid.graph
        for q in induced_subpaths(cid, 4):
            assert find_embeddings(path_of_word(q), g)


def test_canonical_examples():
    assert canonical_cycle("+***") == canonical_cycle("***+")
    for w in ("+*+-**", "++-*", "-+-+-"):
        assert canonical_cycle(w) == canonical_cycle(dual(w))
        assert canonical_cycle(w).canonical_word == canon_ref(w)


@given(st.text(alphabet="+-*", min_size=3, max_size=9))
def test_canonical_idempotent(w):
    c = canonical_cycle(w)
    assert canonical_cycle(c.canonical_word) == c
    assert c.girth == len(w)


@pytest.mark.parametrize("n", range(3, 8))
def test_enumeration_counts(n):
    cycles = enumerate_cycles(n)
    assert len(cycles) == cycle_count_ref(n)
    assert cycles == sorted(set(cycles))
    assert sum(orbit_size(c.canonical_word) for c in cycles) == 3**n


def test_cycles_pairwise_non_isomorphic():
    cycles = enumerate_cycles(4)
    arcs = {c: cycle_arcs(c.canonical_word) for c in cycles}
    for a in cycles:
        for b in cycles:
            if a == b:
                continue
            for perm in permutations(range(4)):
                assert {(perm[u], perm[v]) for u, v in arcs[a]} != arcs[b]


def _brute_automorphisms(w):
    arcs = cycle_arcs(w)
    n = len(w)
    return sorted(
        p for p in permutations(range(n)) if {(p[u], p[v]) for u, v in arcs} == arcs
    )


def test_automorphisms():
    for n in range(3, 7):
        assert len(automorphisms(cycle_of_word("*" * n))) == 2 * n
    for n in range(3, 7):
        for w in all_words(n):
            if abs(height(w)) == 1:
                assert automorphisms(cycle_of_word(w)) == [tuple(range(n))]
    for cid in enumerate_cycles(5):
        assert sorted(automorphisms(cid.graph)) == _brute_automorphisms(cid.canonical_word)
    with pytest.raises(DigraphError):
        automorphisms(path_of_word("**"))


def test_embeddings():
    sym = cycle_of_word("****")
    assert len(find_embeddings(path_of_word("*"), sym)) == 8
    assert find_embeddings(path_of_word("+"), sym) == []
    g = cycle_of_word("++*-+")
    assert find_embeddings(g, g) == [tuple(range(5))]


def test_embeddings_are_induced_injective():
    g = cycle_of_word("+*-**+")
    h = path_of_word("*-*")
    for e in find_embeddings(h, g):
        assert len(set(e)) == h.n
        for u, v in iproduct(range(h.n), repeat=2):
            assert h.has_arc(u, v) == g.has_arc(e[u], e[v])


def test_cycle_id_graph():
    c = CycleId("***+", 4)
    assert c.graph == cycle_of_word("***+")
    assert str(c) == "***+"


def test_dot_export():
    dot = to_dot(cycle_of_word("+*+-**"), name="C")
    assert dot.startswith("digraph C {")
    nodes = [ln for ln in dot.splitlines() if "[label=" in ln]
    edges = [ln for ln in dot.splitlines() if "->" in ln]
    assert len(nodes) == 6
    # symmetric edges are drawn once with dir=both
    assert len(edges) == 6 and sum("dir=both" in e for e in edges) == 3
