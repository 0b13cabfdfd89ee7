"""Value sets, verbal subgroups, iterated commutator chains and word width."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import BudgetExceeded, InexactValuesError
from .group import FiniteGroup, Subgroup, normal_closure, subgroup_closure
from .words import Commutator, Identity, Inverse, Power, Product, Var, Word, append_commutator_variables, evaluate_node, letters, variables

DEFAULT_MAX_TUPLES = 10**8
CHUNK = 1 << 18
CROSS_CHECK_LIMIT = 64


@dataclass(frozen=True, eq=False)
class ValueSet:
    """The set of values of ``word`` in ``group`` (sorted ids).

    ``exact`` is false when the set came from random sampling.
    """

    group: FiniteGroup
    word: Word
    values: np.ndarray
    starred: bool = False
    exact: bool = True

    def __len__(self) -> int:
        return int(self.values.size)

    def __contains__(self, g) -> bool:
        i = np.searchsorted(self.values, int(g))
        return bool(i < self.values.size and self.values[i] == int(g))

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.order, dtype=bool)
        m[self.values] = True
        return m

    def is_normal(self) -> bool:
        G = self.group
        gens = np.asarray(G.generators or [G.identity], dtype=np.intp)
        return bool(self.mask[G.conj(self.values[:, None], gens[None, :])].all())

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "word": str(self.word),
            "starred": self.starred,
            "exact": self.exact,
            "elements": [int(v) for v in self.values],
        }


def _children(node):
    if isinstance(node, Product):
        return node.factors
    if isinstance(node, Commutator):
        return node.args
    return ()


def _disjoint(children) -> bool:
    return all(not (variables(a) & variables(b)) for a, b in combinations(children, 2))


def plan_cost(node, n: int) -> int:
    """Upper bound on the tuple evaluations :func:`w_values` spends on ``node``.

    Subwords in pairwise disjoint variables are combined value set by value
    set; any other node is enumerated over all assignments of its variables.
    """
    if isinstance(node, (Var, Identity)):
        return n
    if isinstance(node, (Inverse, Power)):
        return plan_cost(node.arg, n) + n
    kids = _children(node)
    if _disjoint(kids):
        return sum(plan_cost(c, n) for c in kids) + (len(kids) - 1) * n * n
    return n ** len(variables(node)) * max(1, len(letters(node)) // 8)


def _node_values(node, G: FiniteGroup) -> np.ndarray:
    n = G.order
    if isinstance(node, Var):
        return np.arange(n, dtype=np.intp)
    if isinstance(node, Identity):
        return np.array([G.identity], dtype=np.intp)
    if isinstance(node, Inverse):
        return np.unique(G.inv(_node_values(node.arg, G)))
    if isinstance(node, Power):
        return np.unique(G.power(_node_values(node.arg, G), node.exponent))
    kids = _children(node)
    if _disjoint(kids):
        op = G.mul if isinstance(node, Product) else G.comm
        acc = _node_values(kids[0], G)
        for c in kids[1:]:
            other = _node_values(c, G)
            acc = np.unique(op(acc[:, None], other[None, :]))
        return acc
    return _enumerate(node, G)


def _enumerate(node, G: FiniteGroup) -> np.ndarray:
    """Evaluate ``node`` on every assignment of its variables, in chunks."""
    n = G.order
    vs = sorted(variables(node))
    total = n ** len(vs)
    seen = np.zeros(n, dtype=bool)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        assignment = {}
        # first variable is the most significant digit
        for v in reversed(vs):
            idx, digit = np.divmod(idx, n)
            assignment[v] = digit.astype(np.intp)
        seen[np.asarray(evaluate_node(node, G, assignment))] = True
    return np.flatnonzero(seen)


def w_values(
    G: FiniteGroup,
    w: Word,
    max_tuples: int = DEFAULT_MAX_TUPLES,
    sample: int | None = None,
    seed: int = 0,
) -> ValueSet:
    """``G_w``, the set of all values of ``w`` in ``G``.

    Exact unless the enumeration plan exceeds ``max_tuples``; then either
    :class:`BudgetExceeded` is raised or, with ``sample=N``, ``N`` uniform
    random tuples are evaluated and the result is flagged inexact.
    """
    cost = plan_cost(w.ast, G.order)
    if cost <= max_tuples:
        return ValueSet(G, w, _node_values(w.ast, G))
    if not sample:
        raise BudgetExceeded(cost, max_tuples)
    rng = np.random.default_rng(seed)
    seen = np.zeros(G.order, dtype=bool)
    arity = max(w.arity, 1)
    for start in range(0, sample, CHUNK):
        size = min(CHUNK, sample - start)
        tuples = rng.integers(0, G.order, size=(arity, size)).astype(np.intp)
        seen[np.asarray(evaluate_node(w.ast, G, list(tuples)))] = True
    return ValueSet(G, w, np.flatnonzero(seen), exact=False)


def star(S: ValueSet) -> ValueSet:
    """``S* = S u S^-1``."""
    values = np.union1d(S.values, S.group.inv(S.values))
    return ValueSet(S.group, S.word, values, starred=True, exact=S.exact)


def verbal_subgroup(G: FiniteGroup, w: Word | ValueSet, **budget) -> Subgroup:
    """``w(G)``, the subgroup generated by the values of ``w``."""
    values = w if isinstance(w, ValueSet) else w_values(G, w, **budget)
    H = subgroup_closure(G, values.values.tolist())
    if values.exact and not H.is_normal():
        raise RuntimeError(f"verbal subgroup of {values.word} in {G.name} is not normal")
    return H


def commutator_with_group(G: FiniteGroup, H: Subgroup, economy: bool = True) -> Subgroup:
    """``[H, G]`` for a normal subgroup ``H``.

    With ``economy`` only commutators of the generators of ``H`` are formed
    and the normal closure is taken; otherwise all of ``{[h, g]}`` is closed.
    """
    allg = np.arange(G.order, dtype=np.intp)
    if economy:
        hs = np.asarray(H.generators or [G.identity], dtype=np.intp)
        comms = np.unique(G.comm(hs[:, None], allg[None, :]))
        return normal_closure(G, comms.tolist())
    comms = np.unique(G.comm(H.ids[:, None], allg[None, :]))
    return subgroup_closure(G, comms.tolist())


@dataclass
class VerbalChain:
    """``V_0 = w(G)`` and ``V_{k+1} = [V_k, G]`` for ``k < m``."""

    word: Word
    m: int
    chain: list[Subgroup]
    agrees_with_word: bool | None = field(default=None)

    @property
    def last(self) -> Subgroup:
        return self.chain[-1]

    def orders(self) -> list[int]:
        return [V.order for V in self.chain]


def iterated_commutator_chain(G: FiniteGroup, w: Word, m: int, check_word: bool = True, **budget) -> VerbalChain:
    """Compute ``[w(G), G, ..., G]`` with ``m`` copies of ``G``.

    For ``|G| <= 64`` every step is cross-checked against full-set
    generation. With ``check_word`` the last term is also compared with the
    verbal subgroup of ``[w, x_{n+1}, ..., x_{n+m}]`` when that fits the budget.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    chain = [verbal_subgroup(G, w, **budget)]
    for _ in range(m):
        nxt = commutator_with_group(G, chain[-1])
        if G.order <= CROSS_CHECK_LIMIT and nxt != commutator_with_group(G, chain[-1], economy=False):
            raise RuntimeError("generator economy disagrees with full commutator set")
        chain.append(nxt)
    result = VerbalChain(w, m, chain)
    if check_word:
        v = append_commutator_variables(w, m)
        try:
            result.agrees_with_word = verbal_subgroup(G, v, **{k: x for k, x in budget.items() if k == "max_tuples"}) == chain[-1]
        except BudgetExceeded:
            result.agrees_with_word = None
    return result


@dataclass(frozen=True)
class ProductCover:
    """Breadth-first cover of ``<S>`` by products of elements of ``S``.

    ``dist[g]`` is the least number of factors needed (``-1`` if never
    reached); ``g = parent[g] * factor[g]`` along a shortest product.
    """

    group: FiniteGroup
    dist: np.ndarray
    parent: np.ndarray
    factor: np.ndarray

    @property
    def reached(self) -> np.ndarray:
        return np.flatnonzero(self.dist >= 0)

    @property
    def depth(self) -> int:
        return int(self.dist.max())

    def factors(self, g: int) -> list[int]:
        """A shortest list of elements of ``S`` whose product is ``g``."""
        if self.dist[g] < 0:
            raise ValueError(f"element {g} is not a product of the given set")
        out = []
        while self.dist[g] > 0:
            out.append(int(self.factor[g]))
            g = int(self.parent[g])
        return out[::-1]


def product_cover(G: FiniteGroup, S) -> ProductCover:
    S = np.unique(np.asarray(S, dtype=np.intp))
    dist = np.full(G.order, -1, dtype=np.int64)
    parent = np.full(G.order, -1, dtype=np.intp)
    factor = np.full(G.order, -1, dtype=np.intp)
    dist[G.identity] = 0
    frontier = np.array([G.identity], dtype=np.intp)
    layer = 0
    while frontier.size:
        layer += 1
        prods = np.asarray(G.mul(frontier[:, None], S[None, :]), dtype=np.intp)
        flat = prods.ravel()
        fresh = dist[flat] < 0
        flat = flat[fresh]
        pidx = np.repeat(np.arange(frontier.size), S.size)[fresh]
        sidx = np.tile(np.arange(S.size), frontier.size)[fresh]
        new, first = np.unique(flat, return_index=True)
        dist[new] = layer
        parent[new] = frontier[pidx[first]]
        factor[new] = S[sidx[first]]
        frontier = new
    return ProductCover(G, dist, parent, factor)


def word_width(G: FiniteGroup, w: Word | ValueSet, **budget) -> int:
    """Width of ``w`` in ``G``: least ``k`` with ``w(G)`` covered by products of ``k`` elements of ``G_w*``.

    Zero exactly when ``w(G)`` is trivial.
    """
    values = w if isinstance(w, ValueSet) else w_values(G, w, **budget)
    if not values.exact:
        raise InexactValuesError("word width needs an exact value set")
    S = star(values).values
    cover = product_cover(G, S)
    k = cover.depth
    # one more layer past the cover must add nothing new
    reached = cover.reached
    extra = np.unique(G.mul(reached[:, None], S[None, :]))
    if not np.isin(extra, reached).all() or reached.size != subgroup_closure(G, S.tolist()).order:
        raise RuntimeError("product cover is not closed")
    return k
