"""Constructive checks of conjugacy and order bounds for words ``[w, x_{n+1}, ..., x_{n+m}]``.

Every ``check_*`` function returns a :class:`VerificationReport`. The
per-instance data (value sets, verbal subgroup, conjugator bases) is
shared through :class:`Instance` so a battery computes each set once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Sequence

import numpy as np

from .errors import InexactValuesError, PreconditionError
from .group import FiniteGroup, Subgroup, center, check_axioms, subgroup_closure
from .verbal import DEFAULT_MAX_TUPLES, ValueSet, product_cover, star, w_values, word_width
from .words import FormalProduct, Word, append_commutator_variables, evaluate, formal_product_less

Y_LIMIT = 512
REPLAY_PER_X = 16


@dataclass
class VerificationReport:
    check: str
    group: str
    word: str
    m: int
    constants: dict
    bound: str
    observed: int
    passed: bool
    witness: dict | None = None
    status: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        base = {"r": None, "s_max": None, "e_max": None, "k": None}
        base.update(self.constants)
        self.constants = base
        if not self.status:
            self.status = "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "group": self.group,
            "word": self.word,
            "m": self.m,
            "constants": {k: _plain(v) for k, v in self.constants.items()},
            "bound": self.bound,
            "observed": int(self.observed),
            "pass": bool(self.passed),
            "status": self.status,
        }
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.details:
            out["details"] = _plain(self.details)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


# -- shared per-instance data ---------------------------------------------------------


@dataclass
class BasisData:
    """Conjugator basis of one element ``x`` and its central exponent."""

    x: int
    basis: tuple[int, ...]
    e: int
    per_b: tuple[int, ...]
    hull_order: int
    center_order: int


class Instance:
    """Lazily computed sets for a group ``G``, word ``w`` and ``m``."""

    def __init__(self, G: FiniteGroup, w: Word, m: int, max_tuples: int = DEFAULT_MAX_TUPLES) -> None:
        if m < 0:
            raise ValueError("m must be non-negative")
        self.G, self.w, self.m = G, w, m
        self.max_tuples = max_tuples
        self._basis: dict[int, BasisData] = {}

    @cached_property
    def v(self) -> Word:
        return append_commutator_variables(self.w, self.m)

    @cached_property
    def Gw(self) -> ValueSet:
        return _exact(w_values(self.G, self.w, max_tuples=self.max_tuples))

    @cached_property
    def Gw_star(self) -> ValueSet:
        return star(self.Gw)

    @cached_property
    def Gv(self) -> ValueSet:
        return _exact(w_values(self.G, self.v, max_tuples=self.max_tuples))

    @cached_property
    def Gv_star(self) -> ValueSet:
        return star(self.Gv)

    @cached_property
    def vG(self) -> Subgroup:
        return subgroup_closure(self.G, self.Gv.values.tolist())

    @cached_property
    def cover(self):
        return product_cover(self.G, self.Gv_star.values)

    def basis(self, x: int) -> BasisData:
        x = int(x)
        if x not in self._basis:
            B = conjugator_basis(self.G, x, self.Gv_star.values)
            e, per_b, H, Z = _central_exponent(self.G, x, B)
            self._basis[x] = BasisData(x, tuple(B), e, tuple(per_b), H.order, Z.order)
        return self._basis[x]


def _exact(vs: ValueSet) -> ValueSet:
    if not vs.exact:
        raise InexactValuesError("verification needs exact value sets")
    return vs


def _instance(G, w, m, data: Instance | None, max_tuples: int = DEFAULT_MAX_TUPLES) -> Instance:
    if data is not None:
        return data
    return Instance(G, w, m, max_tuples=max_tuples)


# -- FC profile --------------------------------------------------------------------------------


@dataclass
class FcProfile:
    group: str
    word: str
    orbit_sizes: np.ndarray
    r_fc: int


def fc_profile(G: FiniteGroup, w: Word | ValueSet, **budget) -> FcProfile:
    """Orbit sizes ``|x^{G_w}|`` for every ``x`` and their maximum."""
    values = w if isinstance(w, ValueSet) else w_values(G, w, **budget)
    _exact(values)
    sizes = G.orbit_sizes(values.values)
    return FcProfile(G.name, str(values.word), sizes, int(sizes.max()))


# -- decomposition into values of w and their inverses --------------------------------------


@dataclass(frozen=True)
class Factor:
    """``element = w(witness)`` or, if ``inverted``, its inverse."""

    element: int
    inverted: bool
    witness: tuple[int, ...]


@dataclass
class Decomposition:
    group: FiniteGroup
    word: Word
    m: int
    target: int
    factors: list[Factor]

    def product(self) -> int:
        G = self.group
        return int(reduce(G.mul, (f.element for f in self.factors), G.identity))

    def problems(self) -> list[str]:
        """Empty when the decomposition is valid."""
        G, out = self.group, []
        if len(self.factors) > 2**self.m:
            out.append(f"{len(self.factors)} factors exceed 2^{self.m}")
        for i, f in enumerate(self.factors):
            val = int(evaluate(self.word, G, f.witness))
            if f.inverted:
                val = int(G.inv(val))
            if val != f.element:
                out.append(f"factor {i} does not match its witness")
        if self.product() != self.target:
            out.append("product of factors differs from the target")
        return out


def decompose_into_values(G: FiniteGroup, w: Word, g: Sequence[int], m: int) -> Decomposition:
    """Write ``[w(g_1..g_n), g_{n+1}, ..., g_{n+m}]`` as a product of ``2^m``
    elements of ``G_w*``, each with an assignment witnessing membership.

    Commutation with ``c`` turns the factor list ``(w_1, ..., w_k)`` into
    ``(w_k^-1, ..., w_1^-1, w_1^c, ..., w_k^c)``; conjugating a value of ``w``
    conjugates its witness.
    """
    if m < 1:
        raise ValueError("m must be at least 1; for m = 0 the value is itself a value of w")
    n = w.arity
    g = tuple(int(t) for t in g)
    if len(g) != n + m:
        raise ValueError(f"expected {n + m} elements, got {len(g)}")
    base = g[:n]
    factors = [Factor(int(evaluate(w, G, base)), False, base)]
    for c in g[n:]:
        inverted = [Factor(int(G.inv(f.element)), not f.inverted, f.witness) for f in reversed(factors)]
        conj = [
            Factor(int(G.conj(f.element, c)), f.inverted, tuple(int(G.conj(t, c)) for t in f.witness))
            for f in factors
        ]
        factors = inverted + conj
    target = int(evaluate(append_commutator_variables(w, m), G, g))
    return Decomposition(G, w, m, target, factors)


def check_decomposition(G: FiniteGroup, w: Word, m: int, samples: int = 200, seed: int = 0) -> VerificationReport:
    """Decompose ``samples`` random tuples and validate every decomposition."""
    rng = np.random.default_rng(seed)
    n = w.arity
    tuples = rng.integers(0, G.order, size=(samples, n + m))
    worst, witness, bad = 0, None, 0
    for row in tuples:
        d = decompose_into_values(G, w, row.tolist(), m)
        worst = max(worst, len(d.factors))
        probs = d.problems()
        if probs:
            bad += 1
            if witness is None:
                witness = {"tuple": row.tolist(), "problems": probs}
    return VerificationReport(
        "decomposition",
        G.name,
        str(w),
        m,
        {},
        f"length <= 2^{m} = {2**m}; factors in G_w*; product equals the value",
        worst,
        bad == 0,
        witness,
        details={"tuples": samples, "invalid": bad},
    )


# -- conjugacy bound -------------------------------------------------------------------


def check_conjugacy_bound(G: FiniteGroup, w: Word, m: int, data: Instance | None = None, **budget) -> VerificationReport:
    """``|x^{G_v}| <= |x^{G_w*}|^(2^m)`` for every ``x``."""
    d = _instance(G, w, m, data, **budget)
    s = G.orbit_sizes(d.Gw_star.values)
    o = G.orbit_sizes(d.Gv.values)
    p = 2**m
    violations = [int(x) for x in range(G.order) if int(o[x]) > int(s[x]) ** p]
    ratios = [int(o[x]) / int(s[x]) ** p for x in range(G.order)]
    worst = int(np.argmax(ratios))
    witness = None
    if violations:
        x = violations[0]
        witness = {"x": x, "x_label": G.label(x), "orbit_v": int(o[x]), "s": int(s[x])}
    return VerificationReport(
        "conjugacy_bound",
        G.name,
        str(w),
        m,
        {"r": int(G.orbit_sizes(d.Gw.values).max()), "s_max": int(o.max())},
        "|x^{G_v}| <= |x^{G_w*}|^(2^m) for all x",
        int(o.max()),
        not violations,
        witness,
        details={"worst_x": worst, "worst_ratio": round(ratios[worst], 12), "max_s": int(s.max())},
    )


# -- central exponent -------------------------------------------------------------------


def conjugator_basis(G: FiniteGroup, x: int, S) -> list[int]:
    """Scan ``S`` in id order and keep the first ``b`` giving each new conjugate ``x^b``."""
    S = np.unique(np.asarray(S, dtype=np.intp))
    conj = G.conj(x, S)
    _, first = np.unique(conj, return_index=True)
    return S[np.sort(first)].tolist()


def _central_exponent(G: FiniteGroup, x: int, B: Sequence[int]):
    H = subgroup_closure(G, [x, *B])
    Z = center(H)
    per_b = []
    for b in B:
        k, h = 1, b
        while not Z.mask[h]:
            h = G.mul(h, b)
            k += 1
        per_b.append(k)
    return reduce(math.lcm, per_b, 1), per_b, H, Z


def central_exponent(G: FiniteGroup, x: int, B: Sequence[int], v_star: ValueSet | None = None) -> int:
    """Least ``e >= 1`` with ``b^e`` central in ``<x, B>`` for every ``b`` in ``B``."""
    if v_star is not None:
        missing = [int(b) for b in B if int(b) not in v_star]
        if missing:
            raise PreconditionError(f"elements {missing} are not in the starred value set")
    return _central_exponent(G, int(x), [int(b) for b in B])[0]


def check_central_exponent(G: FiniteGroup, w: Word, m: int, data: Instance | None = None, **budget) -> VerificationReport:
    """For every ``x``: ``b^e`` is central in ``<x, B>`` and ``e`` is least with that property."""
    d = _instance(G, w, m, data, **budget)
    witness, e_max, r_max = None, 1, 0
    for x in range(G.order):
        bd = d.basis(x)
        H = subgroup_closure(G, [x, *bd.basis])
        Z = center(H)
        powers = [int(G.power(b, bd.e)) for b in bd.basis]
        ok = all(Z.mask[p] for p in powers)
        if ok and bd.e > 1:
            ok = any(not Z.mask[int(G.power(b, bd.e - 1))] for b in bd.basis)
        if ok:
            least = next(k for k in range(1, bd.e + 1) if all(Z.mask[int(G.power(b, k))] for b in bd.basis))
            ok = least == bd.e
        e_max, r_max = max(e_max, bd.e), max(r_max, len(bd.basis))
        if not ok and witness is None:
            witness = {"x": x, "x_label": G.label(x), "basis": list(bd.basis), "e": bd.e}
    return VerificationReport(
        "central_exponent",
        G.name,
        str(w),
        m,
        {"r": r_max, "e_max": e_max},
        "b^e in Z(<x,B>) for all b in B, and e-1 fails for some b when e > 1",
        e_max,
        witness is None,
        witness,
    )


# -- sorted conjugator form ------------------------------------------------------------------


@dataclass(frozen=True)
class SortedConjugatorForm:
    """``x^y = x^(b_r^e_r ... b_1^e_1)`` with every ``e_i < e``.

    ``basis`` is ``(b_1, ..., b_r)``; ``exponents`` is ``(e_r, ..., e_1)``.
    """

    x: int
    target: int
    basis: tuple[int, ...]
    exponents: tuple[int, ...]
    e: int

    def conjugator(self, G: FiniteGroup) -> int:
        acc = G.identity
        for b, k in zip(reversed(self.basis), self.exponents):
            acc = G.mul(acc, G.power(b, k))
        return int(acc)

    def is_valid(self, G: FiniteGroup) -> bool:
        return all(0 <= k < self.e for k in self.exponents) and int(G.conj(self.x, self.conjugator(G))) == self.target


class ConjugatorSearch:
    """Lexicographically least exponent vectors ``(e_r, ..., e_1)``, ``0 <= e_i < e``.

    Works on the conjugacy class of ``x``: ``reach[j][z, t]`` says whether
    state ``z`` can be moved to ``t`` by ``b_j^* ... b_1^*``. The greedy pass
    then fixes ``e_r`` first, which is the same answer as scanning all
    vectors in lexicographic order.
    """

    def __init__(self, G: FiniteGroup, x: int, basis: Sequence[int], e: int) -> None:
        self.G, self.x, self.basis, self.e = G, int(x), tuple(int(b) for b in basis), int(e)
        cls = G.orbit(self.x, np.arange(G.order))
        state = np.full(G.order, -1, dtype=np.intp)
        state[cls] = np.arange(cls.size)
        self.state = state
        c = cls.size
        # steps[j][k] = state map of conjugation by b_{j+1}^k
        self.steps = []
        self.powers = []
        for b in self.basis:
            P = state[G.conj(cls, b)]
            pw = np.empty((e, c), dtype=np.intp)
            pw[0] = np.arange(c)
            bp = [G.identity]
            for k in range(1, e):
                pw[k] = P[pw[k - 1]]
                bp.append(int(G.mul(bp[-1], b)))
            self.steps.append(pw)
            self.powers.append(np.asarray(bp, dtype=np.intp))
        reach = [np.eye(c, dtype=bool)]
        for pw in self.steps:
            reach.append(reach[-1][pw].any(axis=0))
        self.reach = reach

    @property
    def reachable(self) -> np.ndarray:
        """Sorted ids of every ``x^(b_r^e_r ... b_1^e_1)``."""
        cls_ids = np.flatnonzero(self.state >= 0)
        return cls_ids[self.reach[-1][self.state[self.x]]]

    def exponents(self, targets) -> tuple[np.ndarray, np.ndarray]:
        """Exponent rows ``(e_r, ..., e_1)`` per target and a mask of targets found."""
        targets = np.atleast_1d(np.asarray(targets, dtype=np.intp))
        r = len(self.basis)
        T = self.state[targets]
        found = T >= 0
        found[found] = self.reach[-1][self.state[self.x], T[found]]
        out = np.zeros((targets.size, r), dtype=np.int64)
        Tf = T[found]
        Z = np.full(Tf.size, self.state[self.x], dtype=np.intp)
        cols = np.arange(Tf.size)
        for col, j in enumerate(range(r - 1, -1, -1)):
            cand = self.steps[j][:, Z]
            ok = self.reach[j][cand, Tf[None, :]]
            choice = np.argmax(ok, axis=0)
            out[found, col] = choice
            Z = cand[choice, cols]
        return out, found

    def conjugators(self, rows: np.ndarray) -> np.ndarray:
        """Elements ``b_r^e_r ... b_1^e_1`` for each exponent row."""
        G = self.G
        acc = np.full(rows.shape[0], G.identity, dtype=np.intp)
        for col, j in enumerate(range(len(self.basis) - 1, -1, -1)):
            acc = G.mul(acc, self.powers[j][rows[:, col]])
        return acc


def sorted_conjugator_form(
    G: FiniteGroup, w: Word, m: int, x: int, y_factors: Sequence[int], data: Instance | None = None
) -> SortedConjugatorForm | None:
    """Sorted form for ``x^y`` where ``y`` is the product of ``y_factors`` (elements of ``G_v*``).

    Returns ``None`` if no exponent vector below the central exponent works.
    """
    d = _instance(G, w, m, data)
    for f in y_factors:
        if int(f) not in d.Gv_star:
            raise PreconditionError(f"factor {int(f)} is not in G_v*")
    y = reduce(G.mul, [int(f) for f in y_factors], G.identity)
    bd = d.basis(x)
    target = int(G.conj(x, y))
    rows, found = ConjugatorSearch(G, x, bd.basis, bd.e).exponents([target])
    if not found[0]:
        return None
    return SortedConjugatorForm(int(x), target, bd.basis, tuple(int(k) for k in rows[0]), bd.e)


# -- replaying the rewriting on formal products ----------------------------------------------


def basis_rewrite(G: FiniteGroup, x: int, basis: Sequence[int], factors: Sequence[int]) -> list[int]:
    """Indices ``i_1..i_j`` (1-based) with ``x^(g_1...g_j) = x^(b_{i_1}...b_{i_j})``.

    Requires every ``g`` in ``factors`` and every basis element to lie in
    one normal set whose ``x``-conjugates are exactly those of the basis.
    Induction: ``x^(P g) = x^((P g P^-1) P)`` and ``P g P^-1`` is in the set.
    """
    index = {int(G.conj(x, b)): i + 1 for i, b in enumerate(basis)}
    idx: list[int] = []
    P = G.identity
    for g in factors:
        z = G.mul(G.mul(P, g), G.inv(P))
        i = index[int(G.conj(x, z))]
        idx.insert(0, i)
        P = G.mul(basis[i - 1], P)
    return idx


def _product(G: FiniteGroup, basis, idx) -> int:
    return int(reduce(G.mul, (basis[i - 1] for i in idx), G.identity))


def swap_step(G: FiniteGroup, x: int, basis: Sequence[int], idx: Sequence[int]) -> tuple[list[int], int] | None:
    """One rewriting step at the first ascent ``i_k < i_{k+1}``.

    ``b_{i_k} b_{i_{k+1}} = c b_{i_k}`` with ``c = b_{i_k} b_{i_{k+1}} b_{i_k}^-1``;
    the prefix ending in ``c`` is re-expressed over the basis. Returns the new
    indices and ``c``, or ``None`` if ``idx`` is already non-increasing.
    """
    for k in range(len(idx) - 1):
        if idx[k] < idx[k + 1]:
            bk, bk1 = basis[idx[k] - 1], basis[idx[k + 1] - 1]
            c = int(G.mul(G.mul(bk, bk1), G.inv(bk)))
            prefix = [basis[i - 1] for i in idx[:k]] + [c]
            new = basis_rewrite(G, x, basis, prefix) + [idx[k]] + list(idx[k + 2 :])
            return new, c
    return None


def sort_by_swaps(
    G: FiniteGroup, x: int, basis: Sequence[int], idx: Sequence[int], normal_set: np.ndarray | None = None, max_steps: int = 100000
) -> list[int]:
    """Apply :func:`swap_step` until the indices are non-increasing.

    Every step is checked: the conjugate of ``x`` is unchanged, the formal
    product strictly decreases, and ``c`` lies in ``normal_set`` (a mask) if given.
    """
    idx = list(idx)
    r = len(basis)
    target = int(G.conj(x, _product(G, basis, idx)))
    for _ in range(max_steps):
        step = swap_step(G, x, basis, idx)
        if step is None:
            return idx
        new, c = step
        if normal_set is not None and not normal_set[c]:
            raise AssertionError(f"swap element {c} left the normal set")
        if int(G.conj(x, _product(G, basis, new))) != target:
            raise AssertionError("swap step changed the conjugate")
        if not formal_product_less(FormalProduct(tuple(new), r), FormalProduct(tuple(idx), r)):
            raise AssertionError("swap step did not decrease the formal product")
        idx = new
    raise AssertionError("swap rewriting did not terminate")


def exponents_from_sorted(idx: Sequence[int], r: int, e: int) -> tuple[int, ...]:
    """Exponents ``(e_r, ..., e_1)`` of a non-increasing index list, reduced mod ``e``."""
    counts = [0] * (r + 1)
    for i in idx:
        counts[i] += 1
    return tuple(counts[i] % e for i in range(r, 0, -1))


# -- sorted conjugators and uniform bounds ----------------------------------------------------------------------------


def _y_values(d: Instance, y_limit: int, seed: int) -> np.ndarray:
    ys = d.vG.ids
    if ys.size > y_limit:
        rng = np.random.default_rng(seed)
        ys = np.sort(rng.choice(ys, size=y_limit, replace=False))
    return ys


def check_sorted_conjugators(
    G: FiniteGroup,
    w: Word,
    m: int,
    data: Instance | None = None,
    y_limit: int = Y_LIMIT,
    replay: int = REPLAY_PER_X,
    seed: int = 0,
    **budget,
) -> VerificationReport:
    """For every ``x`` and tested ``y`` in ``v(G)``, find the sorted conjugator
    form with exponents below ``e`` and check ``|x^{v(G)}| < e^r``.

    For the first ``replay`` values of ``y`` per ``x`` the swap rewriting is
    also replayed from a shortest factorisation of ``y`` over ``G_v*``.
    """
    d = _instance(G, w, m, data, **budget)
    ys = _y_values(d, y_limit, seed)
    mask = d.Gv_star.mask
    witness = None
    max_orbit = r_max = e_max = 0
    degenerate = search_fail = replays = 0
    for x in range(G.order):
        bd = d.basis(x)
        r, e = len(bd.basis), bd.e
        r_max, e_max = max(r_max, r), max(e_max, e)
        orbit = G.orbit(x, d.vG.ids)
        max_orbit = max(max_orbit, orbit.size)
        search = ConjugatorSearch(G, x, bd.basis, e)
        targets = G.conj(x, ys)
        rows, found = search.exponents(targets)
        ok = found.all() and (G.conj(x, search.conjugators(rows)) == targets).all()
        if not ok:
            search_fail += 1
        if e >= 2:
            ok = ok and orbit.size < e**r
        else:
            degenerate += 1
            ok = ok and orbit.size == 1
        for y in ys[:replay]:
            idx = basis_rewrite(G, x, bd.basis, d.cover.factors(int(y)))
            if not idx:
                continue
            srt = sort_by_swaps(G, x, bd.basis, idx, normal_set=mask)
            form = SortedConjugatorForm(x, int(G.conj(x, y)), bd.basis, exponents_from_sorted(srt, r, e), e)
            replays += 1
            ok = ok and form.is_valid(G)
        if not ok and witness is None:
            witness = {"x": x, "x_label": G.label(x), "r": r, "e": e, "orbit": int(orbit.size), "found": int(found.sum())}
    return VerificationReport(
        "sorted_conjugators",
        G.name,
        str(w),
        m,
        {"r": r_max, "e_max": e_max},
        "sorted form with e_i < e exists for every tested y; |x^{v(G)}| < e^r (e >= 2), else |x^{v(G)}| = 1",
        max_orbit,
        witness is None,
        witness,
        details={
            "order_vG": d.vG.order,
            "y_tested": int(ys.size),
            "y_exhaustive": bool(ys.size == d.vG.order),
            "search_failures": search_fail,
            "degenerate_x": degenerate,
            "replays": replays,
        },
    )


def check_uniform_bounds(G: FiniteGroup, w: Word, m: int, data: Instance | None = None, **budget) -> VerificationReport:
    """Uniform constants over all ``x`` and the bound ``max |x^{v(G)}| < e_max^r_max``."""
    d = _instance(G, w, m, data, **budget)
    r_fc = int(G.orbit_sizes(d.Gw.values).max())
    s_star = int(G.orbit_sizes(d.Gw_star.values).max())
    s_max = int(G.orbit_sizes(d.Gv.values).max())
    bases = [d.basis(x) for x in range(G.order)]
    e_max = max(b.e for b in bases)
    r_max = max(len(b.basis) for b in bases)
    orbit_max = int(G.orbit_sizes(d.vG.ids).max())
    ok_conjugacy = s_max <= s_star ** (2**m)
    ok_bound = orbit_max < e_max**r_max if e_max >= 2 else orbit_max == 1
    witness = None
    if not (ok_conjugacy and ok_bound):
        witness = {"uniform_conjugacy_bound": ok_conjugacy, "uniform_orbit_bound": ok_bound}
    return VerificationReport(
        "uniform_bounds",
        G.name,
        str(w),
        m,
        {"r": r_fc, "s_max": s_max, "e_max": e_max, "k": None},
        "max_x |x^{G_v}| <= (max_x |x^{G_w*}|)^(2^m); max_x |x^{v(G)}| < e_max^r_max",
        orbit_max,
        witness is None,
        witness,
        details={"r_max": r_max, "max_star_orbit": s_star},
    )


# -- order bound -----------------------------------------------------------------------------


def check_order_bound(G: FiniteGroup, w: Word, m: int, data: Instance | None = None, **budget) -> VerificationReport:
    """``|v(G)| <= (2r)^(2^m k)`` and ``|G_v| <= (2r)^(2^m)`` with ``r = |G_w|`` and ``k`` the width of ``v``."""
    d = _instance(G, w, m, data, **budget)
    r = len(d.Gw)
    k = word_width(G, d.Gv)
    order_v = d.vG.order
    values_ok = len(d.Gv) <= (2 * r) ** (2**m)
    order_ok = order_v <= (2 * r) ** (2**m * k)
    witness = None
    if not (values_ok and order_ok):
        witness = {"values_bound": values_ok, "order_bound": order_ok, "values_v": len(d.Gv)}
    return VerificationReport(
        "order_bound",
        G.name,
        str(w),
        m,
        {"r": r, "k": k},
        f"|v(G)| <= (2r)^(2^m k) = {(2 * r) ** (2**m * k)}; |G_v| <= (2r)^(2^m) = {(2 * r) ** (2**m)}",
        order_v,
        witness is None,
        witness,
        details={"values_v": len(d.Gv), "identity_in_values": G.identity in d.Gw},
    )


# -- iterated commutator identity --------------------------------------------------------------


def _identity_sides(G: FiniteGroup, y, b, m: int):
    left = y
    for _ in range(m + 1):
        left = G.comm(left, b)
    s = (-1) ** m * 2**m
    right = G.mul(G.power(G.conj(y, b), s), G.power(y, -s))
    return left, right


def iterated_commutator_identity(G: FiniteGroup, y: int, b: int, m: int) -> VerificationReport:
    """``[y, b, ..., b]`` (``m+1`` copies) against ``(y^b)^s y^-s`` with ``s = (-1)^m 2^m``.

    Needs ``b^2 = 1`` and ``[y, y^b] = 1``; otherwise the report has status
    ``inapplicable``.
    """
    y, b = int(y), int(b)
    e = G.identity
    applicable = int(G.mul(b, b)) == e and int(G.comm(y, G.conj(y, b))) == e
    if not applicable:
        return VerificationReport(
            "commutator_identity", G.name, "", m, {}, "requires b^2 = 1 and [y, y^b] = 1", 0, False,
            {"y": y, "b": b}, status="inapplicable",
        )
    left, right = _identity_sides(G, y, b, m)
    passed = int(left) == int(right)
    return VerificationReport(
        "commutator_identity", G.name, "", m, {}, "[y, (m+1) b] == (y^b)^s * y^-s, s = (-1)^m 2^m",
        int(left), passed, None if passed else {"y": y, "b": b, "left": int(left), "right": int(right)},
        details={"y": y, "b": b},
    )


def check_commutator_identity(G: FiniteGroup, ms: Sequence[int] = (0, 1, 2, 3, 4)) -> VerificationReport:
    """Exhaustive over all ``(y, b)`` with ``b^2 = 1`` and ``[y, y^b] = 1``."""
    e = G.identity
    xs = np.arange(G.order, dtype=np.intp)
    involutions = xs[G.mul(xs, xs) == e]
    pairs = cases = 0
    witness = None
    for b in involutions:
        ys = xs[G.comm(xs, G.conj(xs, b)) == e]
        pairs += ys.size
        for m in ms:
            left, right = _identity_sides(G, ys, b, m)
            cases += ys.size
            bad = np.flatnonzero(left != right)
            if bad.size and witness is None:
                witness = {"y": int(ys[bad[0]]), "b": int(b), "m": m}
    return VerificationReport(
        "commutator_identity",
        G.name,
        "",
        max(ms),
        {},
        "[y, (m+1) b] == (y^b)^s * y^-s for all applicable (y, b), m in " + ",".join(map(str, ms)),
        cases,
        witness is None,
        witness,
        details={"applicable_pairs": pairs, "cases": cases, "involutions": int(involutions.size)},
    )


# -- wreath orbit growth ---------------------------------------------------------------------------


def wreath_orbit_growth(A: FiniteGroup, m: int, a: int | None = None) -> VerificationReport:
    """Orbit of the swap ``b`` in ``A wr C2`` under ``[y^k, b, ..., b]`` (``m`` copies of ``b``).

    ``y = ((a, 1), 0)`` with ``a`` of odd order ``t``; the orbit should be
    ``{b z^k}`` with ``z = y^s (y^b)^-s``, ``s = (-1)^m 2^m``, of size ``t``.
    """
    from .constructions import wreath_c2

    if m < 0:
        raise ValueError("m must be non-negative")
    if a is None:
        a = A.generators[0] if A.generators else A.identity
    t = A.element_order(int(a))
    if t % 2 == 0:
        raise PreconditionError(f"element {A.label(a)} has even order {t}; an odd order is required")
    G = wreath_c2(A)
    b = G.swap
    y = G.element_id(a, A.identity, 0)
    s = (-1) ** m * 2**m
    z = int(G.mul(G.power(y, s), G.power(G.conj(y, b), -s)))
    ks = np.arange(G.element_order(y), dtype=np.int64)
    orbit, closed_form_ok = set(), True
    for k in ks:
        c = G.power(y, int(k))
        for _ in range(m):
            c = G.comm(c, b)
        img = int(G.conj(b, c))
        orbit.add(img)
        closed_form_ok = closed_form_ok and img == int(G.mul(b, G.power(z, int(k))))
    size, order_z = len(orbit), G.element_order(z)
    passed = size == t and order_z == t and closed_form_ok
    return VerificationReport(
        "wreath_orbit",
        G.name,
        "",
        m,
        {},
        f"|{{b^[y^k, m b]}}| = t = {t}",
        size,
        passed,
        None if passed else {"orbit": size, "order_z": order_z, "closed_form": closed_form_ok},
        details={"t": t, "order_z": order_z},
    )


def check_group_axioms(G: FiniteGroup) -> VerificationReport:
    res = check_axioms(G)
    return VerificationReport(
        "axioms",
        G.name,
        "",
        0,
        {},
        "associativity, identity, inverses" + (" (exhaustive)" if res["exhaustive"] else " (sampled)"),
        G.order,
        res["ok"],
        res["witness"],
        details={"triples": res.get("triples", 0)},
    )
