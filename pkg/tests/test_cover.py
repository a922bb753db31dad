import random

import pytest

from reflexcycles.cover import (
    LiftFailure,
    cover_window,
    lift,
    lift_or_explain,
    onto_cycle_oracle,
    surjective_product_onto_cycle,
    winding_number,
)
from reflexcycles.digraph import (
    DigraphError,
    cycle_of_word,
    enumerate_cycles,
    induced_subpaths,
    product_of_words,
    word_of_path,
)
from reflexcycles.homsearch import Homomorphism, hom_search
from reflexcycles.pathcond import long_subpaths


def _random_walk(g, start, steps, rng):
    walk = [start]
    for _ in range(steps):
        nb = [v for v in range(g.n) if g.nbrs[walk[-1]] >> v & 1]
        walk.append(rng.choice(nb + [walk[-1]]))
    return walk


def test_winding_examples():
    g = cycle_of_word("*****")
    assert winding_number(g, 0, [3, 3, 3]) == 0
    loop = [0, 1, 2, 3, 4, 0]
    assert winding_number(g, 0, loop) == 1
    assert winding_number(g, 0, loop[::-1]) == -1
    with pytest.raises(DigraphError):
        winding_number(g, 0, [0, 2])


def test_winding_additive():
    rng = random.Random(11)
    g = cycle_of_word("+*-*+*")
    for _ in range(200):
        p = _random_walk(g, rng.randrange(6), rng.randint(0, 12), rng)
        q = _random_walk(g, p[-1], rng.randint(0, 12), rng)
        a = rng.randrange(6)
        assert winding_number(g, a, p + q[1:]) == winding_number(g, a, p) + winding_number(g, a, q)
        assert winding_number(g, a, p + p[::-1][1:]) == 0


@pytest.mark.parametrize("w", ["****", "+*+-**", "++-*+"])
def test_window_is_path(w):
    g = cycle_of_word(w)
    for a in range(g.n):
        for L in (0, 1, 2):
            win = cover_window(g, a, L)
            assert win.graph.n == g.n * (2 * L + 1)
            order = win.path_order()
            sub = win.graph.induced(order)
            assert win.graph.induced(order).n == len(order)
            word = word_of_path(sub)
            rot = (w[a:] + w[:a])
            assert word == (rot * (2 * L + 1))[: len(word)]
            assert all(win.label(v)[0] == win.project(v) for v in range(win.graph.n))


def test_projection_is_homomorphism():
    g = cycle_of_word("+*+-**")
    win = cover_window(g, 2, 2)
    for u, v in win.graph.arcs():
        assert g.has_arc(win.project(u), win.project(v))


def test_lift_constant():
    g = cycle_of_word("+*-*")
    k = product_of_words(["+", "*-"])
    f = Homomorphism(k, g, (2,) * k.n)
    lf = lift(k, f)
    assert lf is not None and set(lf.levels) == {0}


def test_identity_does_not_lift():
    g = cycle_of_word("****")
    f = Homomorphism(g, g, (0, 1, 2, 3))
    assert lift(g, f) is None
    with pytest.raises(LiftFailure, match="nonzero winding"):
        lift_or_explain(g, f)


def test_lift_rejects_disconnected():
    from reflexcycles.digraph import Digraph

    k = Digraph(2, [0, 0])
    g = cycle_of_word("***")
    with pytest.raises(DigraphError):
        lift(k, Homomorphism(k, g, (0, 1)))


def test_lift_products_of_subpaths():
    rng = random.Random(12)
    for cid in enumerate_cycles(5):
        qs = induced_subpaths(cid, 2)
        g = cid.graph
        for _ in range(3):
            k = product_of_words([rng.choice(qs), rng.choice(qs)])
            f = hom_search(k, g, rng=rng)
            lf = lift(k, f, gate=rng.randrange(g.n))
            assert lf is not None
            assert lf.hom.is_valid()
            assert all(lf.window.project(lf.hom[v]) == f[v] for v in range(k.n))


def test_closed_walks_in_products_have_zero_winding():
    rng = random.Random(13)
    g = cycle_of_word("+*+-**")
    k = product_of_words(["*+*", "-**"])
    for _ in range(10):
        f = hom_search(k, g, rng=rng)
        for _ in range(20):
            walk = _random_walk(k, rng.randrange(k.n), rng.randint(1, 15), rng)
            closed = walk + _bfs_path(k, walk[-1], walk[0])[1:]
            image = [f[v] for v in closed]
            assert winding_number(g, rng.randrange(g.n), image) == 0


def _bfs_path(k, s, t):
    prev = {s: None}
    queue = [s]
    for v in queue:
        if v == t:
            break
        for w in range(k.n):
            if k.nbrs[v] >> w & 1 and w not in prev:
                prev[w] = v
                queue.append(w)
    path = [t]
    while path[-1] != s:
        path.append(prev[path[-1]])
    return path[::-1]


def test_onto_cycle_examples():
    assert surjective_product_onto_cycle(long_subpaths("****+"), "****+")
    assert not surjective_product_onto_cycle(["**"], "****")
    assert surjective_product_onto_cycle(long_subpaths("+*-**+*-+"), "+*-**+*-+")


def test_onto_cycle_matches_direct_search_at_girth_4():
    # girth 4 cycles where the direct search finishes quickly
    for w in ("****", "++++", "+++-", "+-+-"):
        qs = long_subpaths(w)
        assert surjective_product_onto_cycle(qs, w) == onto_cycle_oracle(qs, w)
