import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from verbalfc.constructions import build, cyclic
from verbalfc.errors import PreconditionError
from verbalfc.group import center, subgroup_closure
from verbalfc.verify import (
    ConjugatorSearch,
    Instance,
    basis_rewrite,
    central_exponent,
    check_central_exponent,
    check_commutator_identity,
    check_conjugacy_bound,
    check_decomposition,
    check_order_bound,
    check_sorted_conjugators,
    check_uniform_bounds,
    conjugator_basis,
    exponents_from_sorted,
    fc_profile,
    iterated_commutator_identity,
    decompose_into_values,
    sort_by_swaps,
    sorted_conjugator_form,
    swap_step,
    wreath_orbit_growth,
)
from verbalfc.words import FormalProduct, evaluate, formal_product_less, parse_word

COMM = parse_word("[x1,x2]")


def brute_orbit(G, x, S):
    return {int(G.mul(G.mul(G.inv(s), x), s)) for s in S}


def prod(G, xs):
    return reduce(lambda a, b: int(G.mul(a, b)), xs, G.identity)


# -- profiles and decomposition -------------------------------------------------------


def test_fc_profile():
    S3 = build("S3")
    prof = fc_profile(S3, COMM)
    t = S3.parse_element("(1,2)")
    assert prof.orbit_sizes[t] == 3 and prof.r_fc == 3
    assert fc_profile(cyclic(6), COMM).r_fc == 1
    assert fc_profile(build("C3xC3"), parse_word("x1")).orbit_sizes.tolist() == [1] * 9


def test_decomposition_example():
    G = build("S3")
    g = [G.parse_element(s) for s in ("(1,2)", "(1,3)", "(1,2,3)")]
    d = decompose_into_values(G, COMM, g, 1)
    assert len(d.factors) == 2
    A3 = set(subgroup_closure(G, [G.parse_element("(1,2,3)")]).ids.tolist())
    assert all(f.element in A3 for f in d.factors)
    inner = G.comm(g[0], g[1])
    assert prod(G, [f.element for f in d.factors]) == G.comm(inner, g[2]) == d.target
    assert d.problems() == []


def test_decomposition_d4_m2():
    G = build("D4")
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = rng.integers(0, 8, size=4).tolist()
        d = decompose_into_values(G, COMM, g, 2)
        assert len(d.factors) <= 4
        for f in d.factors:
            val = int(evaluate(COMM, G, f.witness))
            assert f.element == (int(G.inv(val)) if f.inverted else val)
        literal = G.comm(G.comm(G.comm(g[0], g[1]), g[2]), g[3])
        assert prod(G, [f.element for f in d.factors]) == literal


def test_decomposition_trivial_and_errors():
    G = build("S4")
    d = decompose_into_values(G, parse_word("[x1,x2,x3]"), [G.identity] * 5, 2)
    assert d.product() == G.identity and len(d.factors) <= 4
    with pytest.raises(ValueError):
        decompose_into_values(G, COMM, [0, 0], 0)
    with pytest.raises(ValueError):
        decompose_into_values(G, COMM, [0, 0], 1)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(["S3", "D4", "Q8", "A4", "S4", "wr2(C3)"]),
    st.sampled_from(["x1", "x1^2", "[x1,x2]", "[x1^2,x2^2]", "x1 x2^-1 x1"]),
    st.integers(1, 3),
    st.randoms(use_true_random=False),
)
def test_decomposition_property(spec, text, m, rnd):
    G, w = build(spec), parse_word(text)
    g = [rnd.randrange(G.order) for _ in range(w.arity + m)]
    d = decompose_into_values(G, w, g, m)
    assert d.problems() == []
    assert len(d.factors) <= 2**m


def test_check_decomposition_report():
    rep = check_decomposition(build("A4"), COMM, 2, samples=100, seed=5)
    assert rep.passed and rep.observed <= 4 and rep.details["invalid"] == 0


# -- conjugacy bound and central exponent --------------------------------------------


def test_conjugacy_bound_example():
    G = build("S3")
    rep = check_conjugacy_bound(G, COMM, 1)
    assert rep.passed
    d = Instance(G, COMM, 1)
    t = G.parse_element("(1,2)")
    assert len(brute_orbit(G, t, d.Gw_star.values)) == 3
    assert len(brute_orbit(G, t, d.Gv.values)) == 3 <= 9
    assert check_conjugacy_bound(cyclic(5), COMM, 2).observed == 1


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "A4", "S4", "wr2(C3)"])
@pytest.mark.parametrize("text", ["x1", "[x1,x2]"])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_conjugacy_bound_brute(spec, text, m, groups):
    G, w = groups(spec), parse_word(text)
    d = Instance(G, w, m)
    for x in range(G.order):
        assert len(brute_orbit(G, x, d.Gv.values)) <= len(brute_orbit(G, x, d.Gw_star.values)) ** (2**m)
    assert check_conjugacy_bound(G, w, m, data=d).passed


def test_central_exponent_examples():
    D4 = build("D4")
    r, s = D4.generators[0], D4.generators[1]
    assert central_exponent(D4, D4.identity, [r]) == 1
    assert central_exponent(D4, s, [r]) == 2
    assert central_exponent(cyclic(6), 1, [1, 2]) == 1


def brute_central_exponent(G, x, B):
    H = subgroup_closure(G, [x, *B]).ids.tolist()
    Z = {h for h in H if all(G.mul(h, k) == G.mul(k, h) for k in H)}
    e = 1
    while not all(int(G.power(b, e)) in Z for b in B):
        e += 1
    return e


@pytest.mark.parametrize("spec", ["S3", "D4", "Q8", "A4", "S4", "wr2(C3)", "D6"])
@pytest.mark.parametrize("text,m", [("x1", 1), ("[x1,x2]", 1), ("x1^2", 0)])
def test_central_exponent_brute(spec, text, m, groups):
    G = groups(spec)
    d = Instance(G, parse_word(text), m)
    for x in range(G.order):
        bd = d.basis(x)
        assert bd.e == brute_central_exponent(G, x, bd.basis)
        # basis realises each conjugate in the starred value set exactly once
        assert sorted(int(G.conj(x, b)) for b in bd.basis) == sorted(brute_orbit(G, x, d.Gv_star.values))
    assert check_central_exponent(G, parse_word(text), m, data=d).passed


def test_central_exponent_requires_starred_values():
    G = build("S3")
    d = Instance(G, COMM, 1)
    t = G.parse_element("(1,2)")
    with pytest.raises(PreconditionError):
        central_exponent(G, 0, [t], v_star=d.Gv_star)


def test_conjugator_basis_first_in_id_order():
    G = build("S4")
    x = G.parse_element("(1,2)")
    B = conjugator_basis(G, x, np.arange(G.order))
    assert len(B) == 6
    for b in B:
        assert all(G.conj(x, c) != G.conj(x, b) for c in range(b))


# -- sorted conjugator form ------------------------------------------------------------------


def brute_least_exponents(G, x, B, e, target):
    """Scan (e_r, ..., e_1) in lexicographic order."""
    for exps in itertools.product(range(e), repeat=len(B)):
        y = prod(G, [int(G.power(b, k)) for b, k in zip(reversed(B), exps)])
        if G.conj(x, y) == target:
            return exps
    return None


def test_sorted_form_example():
    G = build("S3")
    w = parse_word("x1")
    x, y = G.parse_element("(1,2)"), G.parse_element("(1,2,3)")
    form = sorted_conjugator_form(G, w, 1, x, [y])
    assert form is not None and form.is_valid(G)
    assert form.target == G.conj(x, y)
    assert all(k < form.e for k in form.exponents)
    assert form.exponents == brute_least_exponents(G, x, list(form.basis), form.e, form.target)
    assert sorted_conjugator_form(G, w, 1, x, []).exponents == (0,) * len(form.basis)


def test_sorted_form_central_x():
    G = build("D4")
    z = int(center(G).ids[1])
    form = sorted_conjugator_form(G, parse_word("x1"), 1, z, [z])
    assert set(form.exponents) == {0}


@pytest.mark.parametrize("spec", ["S3", "D4", "A4", "S4", "wr2(C3)"])
@pytest.mark.parametrize("text,m", [("x1", 1), ("[x1,x2]", 1), ("x1", 2)])
def test_search_matches_lexicographic_scan(spec, text, m, groups):
    G = groups(spec)
    d = Instance(G, parse_word(text), m)
    for x in range(G.order):
        bd = d.basis(x)
        if len(bd.basis) > 6:
            continue
        search = ConjugatorSearch(G, x, bd.basis, bd.e)
        targets = np.asarray(sorted(brute_orbit(G, x, d.vG.ids)))
        rows, found = search.exponents(targets)
        for t, row, ok in zip(targets, rows, found):
            brute = brute_least_exponents(G, x, list(bd.basis), bd.e, int(t))
            assert ok == (brute is not None)
            if ok:
                assert tuple(row) == brute


# -- swap rewriting ----------------------------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(["S3", "S4", "A4", "wr2(C3)", "D6"]), st.integers(0, 10**6), st.lists(st.integers(0, 10**6), min_size=1, max_size=7))
def test_swap_step_properties(spec, xr, raw):
    G = build(spec)
    d = Instance(G, parse_word("x1"), 1)
    x = xr % G.order
    B = d.basis(x).basis
    r = len(B)
    mask = d.Gv_star.mask
    idx = [1 + v % r for v in raw]
    step = swap_step(G, x, B, idx)
    ascent = any(a < b for a, b in zip(idx, idx[1:]))
    assert (step is None) == (not ascent)
    if step is not None:
        new, c = step
        assert mask[c]
        assert G.conj(x, prod(G, [B[i - 1] for i in new])) == G.conj(x, prod(G, [B[i - 1] for i in idx]))
        assert formal_product_less(FormalProduct(tuple(new), r), FormalProduct(tuple(idx), r))
    srt = sort_by_swaps(G, x, B, idx, normal_set=mask)
    assert all(a >= b for a, b in zip(srt, srt[1:]))
    e = d.basis(x).e
    exps = exponents_from_sorted(srt, r, e)
    y = prod(G, [int(G.power(b, k)) for b, k in zip(reversed(B), exps)])
    assert G.conj(x, y) == G.conj(x, prod(G, [B[i - 1] for i in idx]))


def test_basis_rewrite_preserves_conjugate():
    G = build("S4")
    d = Instance(G, COMM, 1)
    rng = np.random.default_rng(7)
    S = d.Gv_star.values
    for x in range(G.order):
        B = d.basis(x).basis
        gs = rng.choice(S, size=4).tolist()
        idx = basis_rewrite(G, x, B, gs)
        assert G.conj(x, prod(G, [B[i - 1] for i in idx])) == G.conj(x, prod(G, gs))


# -- instance checks -------------------------------------------------------------------------------


@pytest.mark.parametrize("spec", ["S3", "wr2(C3)", "D4", "C6"])
def test_sorted_conjugators(spec, groups):
    G = groups(spec)
    rep = check_sorted_conjugators(G, COMM, 1)
    assert rep.passed and rep.details["search_failures"] == 0
    vG = Instance(G, COMM, 1).vG.ids
    assert rep.observed == max(len(brute_orbit(G, x, vG)) for x in range(G.order))
    if G.is_abelian:
        assert rep.observed == 1


def test_uniform_bounds():
    rep = check_uniform_bounds(cyclic(6), COMM, 1)
    assert rep.passed and rep.constants["r"] == rep.constants["s_max"] == rep.constants["e_max"] == 1
    rep = check_uniform_bounds(build("D4"), COMM, 1)
    assert rep.passed and rep.observed == 1
    S4 = build("S4")
    rep = check_uniform_bounds(S4, COMM, 1)
    Gv = Instance(S4, COMM, 1).Gv.values
    assert rep.passed and rep.constants["s_max"] == max(len(brute_orbit(S4, x, Gv)) for x in range(24)) == 6


def test_order_bound_report():
    rep = check_order_bound(cyclic(4), COMM, 1)
    assert rep.passed and rep.constants["k"] == 0 and rep.observed == 1
    rep = check_order_bound(build("S3"), COMM, 1)
    assert rep.passed and rep.constants["r"] == 3 and rep.observed == 3
    assert rep.observed <= 6 ** (2 * rep.constants["k"])
    rep = check_order_bound(build("Q8"), COMM, 1)
    assert rep.passed and rep.observed == 1


# -- iterated commutator identity and wreath orbits ------------------------------------------------


def test_identity_examples():
    D4 = build("D4")
    r, s = D4.generators[0], D4.generators[1]
    rep = iterated_commutator_identity(D4, r, s, 1)
    assert rep.passed and rep.observed == D4.identity
    assert D4.comm(D4.comm(r, s), s) == D4.identity
    rep0 = iterated_commutator_identity(D4, r, s, 0)
    assert rep0.passed and rep0.observed == D4.mul(D4.conj(r, s), D4.inv(r))
    assert iterated_commutator_identity(D4, D4.identity, s, 3).observed == D4.identity


def test_identity_inapplicable():
    S3 = build("S3")
    rep = iterated_commutator_identity(S3, S3.parse_element("(1,2,3)"), S3.parse_element("(1,2,3)"), 1)
    assert rep.status == "inapplicable" and not rep.passed


def test_identity_exhaustive_literal():
    G = build("wr2(C3)")
    rep = check_commutator_identity(G)
    assert rep.passed
    count = 0
    for b in range(G.order):
        if G.mul(b, b) != G.identity:
            continue
        for y in range(G.order):
            if G.comm(y, G.conj(y, b)) != G.identity:
                continue
            count += 1
            for m in range(5):
                left = y
                for _ in range(m + 1):
                    left = G.comm(left, b)
                s = (-1) ** m * 2**m
                assert left == G.mul(G.power(G.conj(y, b), s), G.power(y, -s))
    assert rep.details["applicable_pairs"] == count


@pytest.mark.parametrize("t,m", [(1, 1), (3, 1), (3, 2), (5, 2), (7, 1), (9, 2)])
def test_wreath_orbit(t, m):
    rep = wreath_orbit_growth(cyclic(t), m)
    assert rep.passed and rep.observed == t
    # brute-force orbit of b under [y^k, m b] over all k
    G = build(f"wr2(C{t})")
    A = G.base
    b = G.swap
    y = G.element_id(A.generators[0] if A.generators else A.identity, A.identity, 0)
    orbit = set()
    for k in range(2 * t + 1):
        c = G.power(y, k)
        for _ in range(m):
            c = G.comm(c, b)
        orbit.add(int(G.conj(b, c)))
    assert len(orbit) == t


def test_wreath_orbit_even_rejected():
    with pytest.raises(PreconditionError):
        wreath_orbit_growth(cyclic(4), 1)


def test_reports_serialise_deterministically():
    import json

    G = build("A4")
    a = [json.dumps(f(G, COMM, 1).to_dict(), sort_keys=True) for f in (check_sorted_conjugators, check_uniform_bounds, check_order_bound)]
    b = [json.dumps(f(G, COMM, 1).to_dict(), sort_keys=True) for f in (check_sorted_conjugators, check_uniform_bounds, check_order_bound)]
    assert a == b
