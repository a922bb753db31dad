import pytest

from reflexcycles.digraph import canonical_cycle, enumerate_cycles, representations
from reflexcycles.pathcond import (
    AlmostSymmetric,
    BudgetExceeded,
    SStarDecomposition,
    WitnessParams,
    bracket,
    check_word_criterion,
    find_s_star_decompositions,
    hat,
    long_subpaths,
    path_condition_bruteforce,
    path_condition_syntactic,
    path_condition_word_criterion,
    spanning_paths,
    w_construction,
)
from reflexcycles.words import WordError, is_self_dual


def test_bracket():
    assert bracket("*", "+") == "+"
    assert bracket("+", "-") == "-+"
    assert bracket("+", "+") == "+"
    assert bracket("-", "*") == "-"


def test_hat():
    assert hat("+", 3) == "---"
    assert hat("*", 5) == ""
    assert hat("-", 2) == "++"
    with pytest.raises(ValueError):
        hat("+", 0)


def test_w_construction():
    for N in (1, 4, 9):
        assert w_construction("+", N) == "-" * N
    assert w_construction("*", WitnessParams(6)) == ""
    assert w_construction("+-", 2) == "--" + "-+" + "++"
    assert w_construction("***", 5) == "**"
    with pytest.raises(WordError):
        w_construction("", 3)
    with pytest.raises(ValueError):
        WitnessParams(0)
    assert WitnessParams.for_girth(5).N == 12


def test_subpath_families():
    assert long_subpaths("****+") == ["***", "**+", "**-", "*+*", "*-*", "+**", "-**"]
    assert spanning_paths("****") == ["***"]
    for cid in enumerate_cycles(5):
        qs = long_subpaths(cid)
        assert all(len(q) == 3 for q in qs)


def test_check_word_criterion():
    w = w_construction("***", WitnessParams.for_girth(4))
    assert check_word_criterion("****", "***", w)
    assert not check_word_criterion("****+", "****", w_construction("****", 12))
    for cid in enumerate_cycles(5):
        for p in spanning_paths(cid):
            assert not check_word_criterion(cid, p, p)
    with pytest.raises(WordError):
        check_word_criterion("****", "**", "+")
    with pytest.raises(WordError):
        check_word_criterion("****", "+++", "+")


def test_syntactic_examples():
    v = path_condition_syntactic("****+")
    assert v.fails and isinstance(v.witness, AlmostSymmetric)
    v = path_condition_syntactic("+*-**+*-+")
    assert v.fails and v.witness == SStarDecomposition("+*-", 1, "+*-**+*-+")
    for n in range(3, 9):
        assert not path_condition_syntactic("*" * n).fails
    assert SStarDecomposition("*", 1, "****+") in find_s_star_decompositions("****+")


def test_decompositions_are_genuine():
    for n in range(4, 9):
        for cid in enumerate_cycles(n):
            for d in find_s_star_decompositions(cid):
                assert d.word in representations(cid.canonical_word)
                assert d.word == (d.S + "**") * d.k + d.S + "+"
                assert is_self_dual(d.S) and d.k >= 1


def test_bruteforce_examples():
    assert path_condition_bruteforce("****+").fails
    assert not path_condition_bruteforce("****").fails
    with pytest.raises(BudgetExceeded, match="girth 8"):
        path_condition_bruteforce("*" * 8)


@pytest.mark.parametrize("n", [4, 5])
def test_bruteforce_matches_syntactic(n):
    for cid in enumerate_cycles(n):
        assert path_condition_bruteforce(cid).fails == path_condition_syntactic(cid).fails, cid


def test_bruteforce_routes_agree_girth_4():
    for cid in enumerate_cycles(4):
        a = path_condition_bruteforce(cid, method="inclusion").fails
        b = path_condition_bruteforce(cid, method="search").fails
        assert a == b


# Girth 3 is decided by direct exhaustive search into the triangle; the
# syntactic rule only flags **+ here, so the two disagree on four cycles.
GIRTH3_DIRECT = {
    "***": False,
    "**+": True,
    "*++": True,
    "*+-": True,
    "*-+": True,
    "+++": False,
    "++-": True,
}


def test_girth_3_direct_results():
    assert sorted(GIRTH3_DIRECT) == [c.canonical_word for c in enumerate_cycles(3)]
    for w, fails in GIRTH3_DIRECT.items():
        assert path_condition_bruteforce(w).fails == fails, w
    disagree = [w for w in GIRTH3_DIRECT if path_condition_syntactic(w).fails != GIRTH3_DIRECT[w]]
    assert disagree == ["*++", "*+-", "*-+", "++-"]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_word_criterion_one_sided_and_stable_in_N(n):
    for cid in enumerate_cycles(n):
        truth = path_condition_syntactic(cid).fails
        verdicts = {
            N: path_condition_word_criterion(cid, WitnessParams(N)).fails
            for N in (n, 2 * n + 2, 3 * n)
        }
        assert len(set(verdicts.values())) == 1, (cid, verdicts)
        if not verdicts[n]:
            assert not truth
        if truth:
            assert verdicts[n]


def test_word_criterion_witnesses_verify():
    for cid in enumerate_cycles(5):
        if path_condition_word_criterion(cid).fails:
            continue
        N = WitnessParams.for_girth(5)
        for p in spanning_paths(cid):
            assert check_word_criterion(cid, p, w_construction(p, N))


def test_verdict_json():
    v = path_condition_syntactic("+*-**+*-+")
    assert v.to_json() == {
        "fails": True,
        "witness": {"kind": "s-star", "S": "+*-", "k": 1, "word": "+*-**+*-+"},
        "method": "syntactic",
    }
    assert path_condition_syntactic("****").to_json()["witness"] is None
    assert canonical_cycle("+****").canonical_word == "****+"
