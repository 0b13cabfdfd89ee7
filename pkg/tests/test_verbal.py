import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from verbalfc.constructions import build, cyclic
from verbalfc.errors import BudgetExceeded, InexactValuesError
from verbalfc.group import subgroup_closure
from verbalfc.verbal import (
    ValueSet,
    commutator_with_group,
    iterated_commutator_chain,
    plan_cost,
    product_cover,
    star,
    verbal_subgroup,
    w_values,
    word_width,
)
from verbalfc.words import append_commutator_variables, evaluate_letters, parse_word

WORDS = ["x1", "x1^2", "[x1,x2]", "[x1^2,x2^2]", "[x1,x2,x3]", "x1^3 x2^-1 x1", "[x1,x2][x1,x3]"]


def brute_values(G, w):
    """Every value, one tuple at a time, by flat letter evaluation."""
    return sorted({int(evaluate_letters(w, G, t)) for t in itertools.product(range(G.order), repeat=w.arity)})


def brute_closure(G, S):
    H = {G.identity} | set(S)
    while True:
        new = {int(G.mul(a, b)) for a in H for b in H} - H
        if not new:
            return H
        H |= new


def brute_width(G, S):
    """Smallest k with every element of <S> a product of at most k elements of S."""
    target = brute_closure(G, S)
    layer, k = {G.identity}, 0
    while layer != target:
        layer = layer | {int(G.mul(a, s)) for a in layer for s in S}
        k += 1
    return k


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "C6"])
@pytest.mark.parametrize("text", WORDS)
def test_values_match_brute_force(spec, text, groups):
    G, w = groups(spec), parse_word(text)
    if G.order ** w.arity > 20000:
        pytest.skip("brute force too large")
    assert w_values(G, w).values.tolist() == brute_values(G, w)


def test_value_examples():
    S3, Q8, D4 = build("S3"), build("Q8"), build("D4")
    w = parse_word("[x1,x2]")
    assert sorted(S3.label(g) for g in w_values(S3, w).values) == ["()", "(1,2,3)", "(1,3,2)"]
    assert sorted(Q8.label(g) for g in w_values(Q8, w).values) == ["-1", "1"]
    r = D4.generators[0]
    assert set(w_values(D4, w).values.tolist()) == {D4.identity, int(D4.mul(r, r))}
    assert len(w_values(S3, parse_word("x1"))) == 6


def test_star():
    C5 = cyclic(5)
    r = C5.parse_element("r")
    S = ValueSet(C5, parse_word("x1"), np.array([r]))
    assert sorted(C5.label(g) for g in star(S).values) == ["r", "r^4"]
    S3 = build("S3")
    vs = w_values(S3, parse_word("[x1,x2]"))
    assert star(vs).values.tolist() == vs.values.tolist()


def test_verbal_examples():
    S3, D4 = build("S3"), build("D4")
    w = parse_word("[x1,x2]")
    assert verbal_subgroup(S3, w).order == 3
    V = verbal_subgroup(D4, w)
    assert V.order == 2 and V.is_central()
    assert verbal_subgroup(S3, parse_word("x1")).order == 6


def test_chain_examples():
    D4, S3 = build("D4"), build("S3")
    w = parse_word("[x1,x2]")
    ch = iterated_commutator_chain(D4, w, 1)
    assert ch.orders() == [2, 1] and ch.agrees_with_word
    ch = iterated_commutator_chain(S3, w, 1)
    assert ch.orders() == [3, 3] and ch.agrees_with_word
    assert iterated_commutator_chain(S3, w, 0).orders() == [3]


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "A4", "S4", "D6", "wr2(C3)"])
@pytest.mark.parametrize("text", ["x1", "x1^2", "[x1,x2]"])
def test_chain_matches_brute_commutators(spec, text, groups):
    G, w = groups(spec), parse_word(text)
    ch = iterated_commutator_chain(G, w, 3)
    assert ch.agrees_with_word in (True, None)
    for k in range(3):
        prev = set(ch.chain[k].ids.tolist())
        comms = {int(G.comm(h, g)) for h in prev for g in range(G.order)}
        assert brute_closure(G, comms) == set(ch.chain[k + 1].ids.tolist())


@pytest.mark.parametrize("spec,text,m", [("S3", "[x1,x2]", 1), ("D4", "x1", 2), ("A4", "x1^2", 1), ("Q8", "x1", 1)])
def test_chain_agrees_with_appended_word(spec, text, m, groups):
    G, w = groups(spec), parse_word(text)
    ch = iterated_commutator_chain(G, w, m)
    v = append_commutator_variables(w, m)
    assert brute_closure(G, brute_values(G, v)) == set(ch.last.ids.tolist())


def test_width_examples():
    S3, S4 = build("S3"), build("S4")
    w = parse_word("[x1,x2]")
    assert word_width(S3, w) == 1
    assert word_width(S4, w) == 1
    # S4 commutators: all 576 pairs give exactly A4
    comms = {int(S4.comm(a, b)) for a in range(24) for b in range(24)}
    assert len(comms) == 12 and comms == set(subgroup_closure(S4, list(comms)).ids.tolist())
    assert word_width(build("C6"), w) == 0


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "A4", "S4", "D6", "C3xS3", "wr2(C3)"])
@pytest.mark.parametrize("text", ["x1", "x1^2", "[x1,x2]", "[x1,x2,x3]"])
def test_width_matches_brute_force(spec, text, groups):
    G, w = groups(spec), parse_word(text)
    vs = w_values(G, w)
    S = sorted(set(vs.values.tolist()) | {int(G.inv(g)) for g in vs.values})
    assert word_width(G, vs) == brute_width(G, S)


def test_product_cover_factors():
    G = build("S4")
    S = [G.parse_element("(1,2)"), G.parse_element("(1,2,3,4)")]
    cover = product_cover(G, S)
    for g in range(G.order):
        fs = cover.factors(g)
        assert len(fs) == cover.dist[g]
        acc = G.identity
        for f in fs:
            acc = G.mul(acc, f)
        assert acc == g


def test_budget_and_sampling():
    G = build("S4")
    w = parse_word("[x1,x2,x3,x4,x5,x1]")
    assert plan_cost(w.ast, G.order) > 10**6
    with pytest.raises(BudgetExceeded):
        w_values(G, w, max_tuples=10**6)
    approx = w_values(G, w, max_tuples=10**6, sample=5000, seed=1)
    assert not approx.exact
    exact = w_values(G, parse_word("[x1,x2]"))
    assert set(approx.values.tolist()) <= set(exact.values.tolist())
    with pytest.raises(InexactValuesError):
        word_width(G, approx)
    again = w_values(G, w, max_tuples=10**6, sample=5000, seed=1)
    assert again.values.tolist() == approx.values.tolist()


def test_disjoint_plan_is_cheap():
    # [x1,x2][x3,x4] splits into two independent factors
    w = parse_word("[x1,x2][x3,x4]")
    assert plan_cost(w.ast, 100) < 100**3
    G = build("S3")
    assert w_values(G, w).values.tolist() == brute_values(G, w)


def test_commutator_with_group_economy():
    G = build("S4")
    for H in [verbal_subgroup(G, parse_word(t)) for t in ["x1", "x1^2", "[x1,x2]"]]:
        assert commutator_with_group(G, H) == commutator_with_group(G, H, economy=False)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["S3", "D4", "Q8", "A4", "S4", "C3xS3", "wr2(C3)"]), st.sampled_from(WORDS))
def test_value_set_invariants(spec, text):
    G, w = build(spec), parse_word(text)
    vs = w_values(G, w)
    assert G.identity in vs
    assert vs.is_normal()
    xs = np.arange(G.order)
    assert vs.mask[G.conj(vs.values[:, None], xs[None, :])].all()
    V = verbal_subgroup(G, vs)
    assert V.is_normal() and V.mask[vs.values].all()
    k = word_width(G, vs)
    assert (k == 0) == (V.order == 1)


def test_value_set_json():
    G = build("S3")
    js = w_values(G, parse_word("[x1,x2]")).to_json()
    assert js == {"group": "S3", "word": "[x1,x2]", "starred": False, "exact": True, "elements": js["elements"]}
    assert js["elements"] == sorted(js["elements"])
