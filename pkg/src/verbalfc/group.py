"""Finite groups on dense integer ids.

Elements of a group of order ``n`` are the integers ``0 .. n-1``. Every group
of order at most :data:`TABLE_LIMIT` carries a flat multiplication table, so
products are single lookups and all group operations broadcast over numpy
arrays of ids. Larger permutation groups multiply image arrays instead.

Conventions, fixed once for the whole package:

* permutations act on the right, ``(s*t)(i) = t(s(i))``;
* conjugation is ``x^g = g^-1 x g``;
* commutators are ``[a, b] = a^-1 b^-1 a b`` and left-normed,
  ``[a, b, c] = [[a, b], c]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import GroupSpecError, NotCentralError, OrderCapExceeded, ParentMismatchError

TABLE_LIMIT = 4096
DEFAULT_MAX_ORDER = 10**6


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the id of ``element_i * element_j``.
    """

    backend = "cayley"

    def __init__(
        self,
        table,
        name: str = "G",
        generators: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
    ) -> None:
        table = np.asarray(table, dtype=np.intp)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupSpecError("multiplication table must be a non-empty square array")
        n = table.shape[0]
        if table.min() < 0 or table.max() >= n:
            raise GroupSpecError(f"table entries must be ids in 0..{n - 1}")
        table.setflags(write=False)
        self._setup(table, n, name, labels)
        self.generators = tuple(generators) if generators is not None else greedy_generators(self)

    def _setup(self, table, order: int, name: str, labels) -> None:
        self.table = table
        self.order = order
        self.name = name
        self._labels = list(labels) if labels is not None else None
        rows = np.flatnonzero((table == np.arange(order)).all(axis=1))
        if rows.size != 1:
            raise GroupSpecError("table has no two-sided identity")
        self.identity = int(rows[0])
        has_inv = table == self.identity
        if not has_inv.any(axis=1).all():
            raise GroupSpecError("some element has no inverse")
        inv = np.argmax(has_inv, axis=1).astype(np.intp)
        inv.setflags(write=False)
        self._inv = inv

    # -- elementwise operations; each accepts ints or integer arrays --------

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self._inv[a]

    def conj(self, x, g):
        """``x^g = g^-1 x g``."""
        return self.mul(self.mul(self.inv(g), x), g)

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = np.full(np.shape(a), self.identity, dtype=np.intp)
        if result.ndim == 0:
            result = self.identity
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def element_order(self, g: int) -> int:
        k, h = 1, g
        while h != self.identity:
            h = self.mul(h, g)
            k += 1
        return k

    # -- sets --------------------------------------------------------------

    def orbit(self, x, S) -> np.ndarray:
        """Sorted ids of ``{x^s : s in S}``."""
        S = np.asarray(S, dtype=np.intp)
        return np.unique(self.conj(x, S))

    def orbit_sizes(self, S) -> np.ndarray:
        """``|x^S|`` for every element ``x`` at once."""
        S = np.asarray(S, dtype=np.intp)
        xs = np.arange(self.order)
        conj = np.sort(self.conj(xs[:, None], S[None, :]), axis=1)
        return 1 + (np.diff(conj, axis=1) != 0).sum(axis=1)

    # -- misc --------------------------------------------------------------

    def __len__(self) -> int:
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def element(self, g: int) -> "GroupElement":
        if not 0 <= int(g) < self.order:
            raise IndexError(f"element id {g} out of range for {self.name}")
        return GroupElement(self, int(g))

    def label(self, g: int) -> str:
        if self._labels is not None:
            return self._labels[int(g)]
        return f"g{int(g)}"

    def parse_element(self, text: str) -> int:
        """Resolve an element written as an id or as one of its labels."""
        text = text.strip()
        # plain digits are ids; anything else (including Q8's "-1") is a label
        if text.isdigit():
            g = int(text)
            if g >= self.order:
                raise GroupSpecError(f"element id {g} out of range for {self.name} (order {self.order})")
            return g
        if self._labels is not None and text in self._labels:
            return self._labels.index(text)
        raise GroupSpecError(f"cannot read {text!r} as an element of {self.name}")

    @property
    def is_abelian(self) -> bool:
        gens = np.asarray(self.generators, dtype=np.intp)
        return bool((self.mul(gens[:, None], gens[None, :]) == self.mul(gens[None, :], gens[:, None])).all())

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} of order {self.order}>"


class PermutationGroup(FiniteGroup):
    """Group generated by permutations of ``0 .. degree-1``.

    Elements are numbered in breadth-first order from the identity, trying
    the generators in the order given. A multiplication table is built when
    the order is at most :data:`TABLE_LIMIT`.
    """

    backend = "permutation"

    def __init__(
        self,
        generators: Sequence[Sequence[int]],
        degree: int | None = None,
        name: str = "G",
        max_order: int = DEFAULT_MAX_ORDER,
    ) -> None:
        gens = [np.asarray(g, dtype=np.intp) for g in generators]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        for g in gens:
            if len(g) != degree or sorted(g.tolist()) != list(range(degree)):
                raise GroupSpecError(f"generator {g.tolist()} is not a permutation of 0..{degree - 1}")
        self.degree = degree
        ident = np.arange(degree, dtype=np.intp)
        perms, parent, via, right = bfs_closure(
            ident.tobytes(),
            [g.tobytes() for g in gens],
            lambda a, b: _compose_bytes(a, b),
            max_order,
        )
        self.perms = np.frombuffer(b"".join(perms), dtype=np.intp).reshape(len(perms), degree)
        self._index = {p: i for i, p in enumerate(perms)}
        n = len(perms)
        gen_ids = [self._index[g.tobytes()] for g in gens]
        if n <= TABLE_LIMIT:
            table = table_from_right_maps(parent, via, right)
            self._setup(table, n, name, None)
        else:
            self.table = None
            self.order = n
            self.name = name
            self._labels = None
            self.identity = 0
            inv_perm = np.argsort(self.perms, axis=1)
            self._inv = np.array([self._index[row.tobytes()] for row in inv_perm], dtype=np.intp)
        self.generators = tuple(dict.fromkeys(gen_ids))

    def mul(self, a, b):
        if self.table is not None:
            return self.table[a, b]
        if np.ndim(a) == 0 and np.ndim(b) == 0:
            return self._index[self.perms[b][self.perms[a]].tobytes()]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.empty(a.shape, dtype=np.intp)
        for pos in np.ndindex(a.shape):
            out[pos] = self._index[self.perms[b[pos]][self.perms[a[pos]]].tobytes()]
        return out

    def perm_id(self, images: Sequence[int]) -> int:
        key = np.asarray(images, dtype=np.intp).tobytes()
        if key not in self._index:
            raise GroupSpecError(f"permutation {list(images)} is not in {self.name}")
        return self._index[key]

    def label(self, g: int) -> str:
        return format_cycles(self.perms[int(g)])

    def parse_element(self, text: str) -> int:
        text = text.strip()
        if text.startswith("("):
            return self.perm_id(parse_cycles(text, self.degree))
        return super().parse_element(text)


@dataclass(frozen=True)
class GroupElement:
    """An element of a specific group, for the checked public API."""

    group: FiniteGroup
    id: int

    def __post_init__(self) -> None:
        if not 0 <= self.id < self.group.order:
            raise IndexError(f"element id {self.id} out of range for {self.group.name}")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, int(self.group.power(self.id, k)))

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def __repr__(self) -> str:
        return f"{self.group.name}[{self.group.label(self.id)}]"


def _same_parent(*elements: GroupElement) -> FiniteGroup:
    G = elements[0].group
    for e in elements[1:]:
        if e.group is not G:
            raise ParentMismatchError(f"{e!r} and {elements[0]!r} belong to different groups")
    return G


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    G = _same_parent(g, h)
    return GroupElement(G, int(G.mul(g.id, h.id)))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, int(g.group.inv(g.id)))


def conjugate(x: GroupElement, g: GroupElement) -> GroupElement:
    """Return ``x^g = g^-1 x g``."""
    G = _same_parent(x, g)
    return GroupElement(G, int(G.conj(x.id, g.id)))


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """Return ``[a, b] = a^-1 b^-1 a b``."""
    G = _same_parent(a, b)
    return GroupElement(G, int(G.comm(a.id, b.id)))


def conjugacy_orbit(x: GroupElement, S: Iterable[GroupElement]) -> frozenset[GroupElement]:
    """Return ``x^S = {x^s : s in S}``."""
    S = list(S)
    if not S:
        return frozenset()
    G = _same_parent(x, *S)
    return frozenset(GroupElement(G, int(i)) for i in G.orbit(x.id, [s.id for s in S]))


# -- subgroups ------------------------------------------------------------


class Subgroup:
    """A subgroup of ``parent`` together with a generating list.

    ``elements`` lists ids in breadth-first discovery order from the
    generators; ``mask`` is a membership index over the parent's ids.
    """

    def __init__(self, parent: FiniteGroup, elements: Sequence[int], generators: Sequence[int]) -> None:
        self.parent = parent
        self.elements = tuple(int(e) for e in elements)
        self.generators = tuple(int(g) for g in generators)
        mask = np.zeros(parent.order, dtype=bool)
        mask[list(self.elements)] = True
        mask.setflags(write=False)
        self.mask = mask
        self.ids = np.flatnonzero(mask)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        if isinstance(g, GroupElement):
            if g.group is not self.parent:
                raise ParentMismatchError(f"{g!r} does not belong to {self.parent.name}")
            g = g.id
        return bool(self.mask[int(g)])

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and bool((self.mask == other.mask).all())

    def __hash__(self) -> int:
        return hash((id(self.parent), self.ids.tobytes()))

    def is_normal(self) -> bool:
        G = self.parent
        gens = np.asarray(self.generators or [G.identity], dtype=np.intp)
        ggens = np.asarray(G.generators or [G.identity], dtype=np.intp)
        return bool(self.mask[G.conj(gens[:, None], ggens[None, :])].all())

    def is_central(self) -> bool:
        G = self.parent
        ggens = np.asarray(G.generators or [G.identity], dtype=np.intp)
        ids = self.ids
        return bool((G.mul(ids[:, None], ggens[None, :]) == G.mul(ggens[None, :], ids[:, None])).all())

    def __repr__(self) -> str:
        return f"<Subgroup of {self.parent.name} of order {self.order}>"


def _ids(G: FiniteGroup, gens) -> list[int]:
    out = []
    for g in gens:
        if isinstance(g, GroupElement):
            if g.group is not G:
                raise ParentMismatchError(f"{g!r} does not belong to {G.name}")
            g = g.id
        g = int(g)
        if not 0 <= g < G.order:
            raise IndexError(f"element id {g} out of range for {G.name}")
        out.append(g)
    return list(dict.fromkeys(out))


def subgroup_closure(G: FiniteGroup, gens: Iterable = ()) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``gens``.

    Breadth-first from the identity by right multiplication with the
    generators, so the element order is deterministic.
    """
    gens = _ids(G, gens)
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    found = [np.array([G.identity], dtype=np.intp)]
    if gens:
        garr = np.asarray(gens, dtype=np.intp)
        frontier = found[0]
        while frontier.size:
            cand = np.asarray(G.mul(frontier[:, None], garr[None, :]), dtype=np.intp).ravel()
            _, first = np.unique(cand, return_index=True)
            cand = cand[np.sort(first)]
            new = cand[~seen[cand]]
            seen[new] = True
            found.append(new)
            frontier = new
    return Subgroup(G, np.concatenate(found), gens)


def subgroup_from_elements(G: FiniteGroup, ids: Iterable[int]) -> Subgroup:
    """Wrap a set known to be a subgroup, picking generators greedily by id."""
    ids = np.unique(np.asarray(list(ids), dtype=np.intp))
    gens: list[int] = []
    H = subgroup_closure(G, [])
    for g in ids:
        if not H.mask[g]:
            gens.append(int(g))
            H = subgroup_closure(G, gens)
    if H.order != ids.size or not H.mask[ids].all():
        raise ValueError("element set is not a subgroup")
    return H


def greedy_generators(G: FiniteGroup) -> tuple[int, ...]:
    return subgroup_from_elements(G, range(G.order)).generators


def normal_closure(G: FiniteGroup, gens: Iterable) -> Subgroup:
    """Smallest normal subgroup of ``G`` containing ``gens``."""
    gens = _ids(G, gens)
    ggens = np.asarray(G.generators or [G.identity], dtype=np.intp)
    H = subgroup_closure(G, gens)
    while True:
        hg = np.asarray(H.generators or [G.identity], dtype=np.intp)
        conj = np.unique(G.conj(hg[:, None], ggens[None, :]))
        missing = conj[~H.mask[conj]]
        if missing.size == 0:
            return H
        H = subgroup_closure(G, list(H.generators) + missing.tolist())


def center(G: FiniteGroup | Subgroup) -> Subgroup:
    """``Z(G)``; for a :class:`Subgroup` ``H`` returns ``Z(H)`` inside the parent."""
    if isinstance(G, Subgroup):
        return centralizer(G.parent, G.generators, within=G)
    return centralizer(G, G.generators)


def centralizer(G: FiniteGroup, S: Iterable, within: Subgroup | None = None) -> Subgroup:
    """``C(S) = {c : cs = sc for all s in S}``, optionally intersected with ``within``."""
    S = np.asarray(_ids(G, S) or [G.identity], dtype=np.intp)
    cand = within.ids if within is not None else np.arange(G.order)
    ok = (G.mul(cand[:, None], S[None, :]) == G.mul(S[None, :], cand[:, None])).all(axis=1)
    return subgroup_from_elements(G, cand[ok])


def quotient_by_central(G: FiniteGroup, Z: Subgroup) -> FiniteGroup:
    """Cayley-table group of cosets ``G/Z`` for a central subgroup ``Z``.

    The returned group has ``projection`` (array mapping ids of ``G`` to
    coset ids) and ``parent`` attributes. Cosets are numbered by their
    smallest element id.
    """
    if Z.parent is not G:
        raise ParentMismatchError("subgroup belongs to a different group")
    if not Z.is_central():
        raise NotCentralError(f"subgroup of order {Z.order} is not central in {G.name}")
    if G.table is None:
        raise OrderCapExceeded(G.order, TABLE_LIMIT, "quotient source")
    coset_min = G.table[:, Z.ids].min(axis=1)
    reps = np.unique(coset_min)
    projection = np.searchsorted(reps, coset_min)
    projection.setflags(write=False)
    table = projection[G.table[reps[:, None], reps[None, :]]]
    gens = [int(projection[g]) for g in G.generators]
    Q = FiniteGroup(table, name=f"{G.name}/Z{Z.order}", generators=[g for g in dict.fromkeys(gens)])
    Q.projection = projection
    Q.parent = G
    return Q


def check_axioms(G: FiniteGroup, exhaustive_limit: int = 64, samples: int = 10**4, seed: int = 0) -> dict:
    """Check associativity, identity and inverses.

    Associativity is exhaustive for ``order <= exhaustive_limit`` and uses
    ``samples`` random triples above. Returns a summary dict with ``ok``.
    """
    n = G.order
    e = G.identity
    xs = np.arange(n)
    result = {"order": n, "exhaustive": n <= exhaustive_limit, "ok": True, "witness": None}
    if not ((G.mul(e, xs) == xs).all() and (G.mul(xs, e) == xs).all()):
        result.update(ok=False, witness={"axiom": "identity"})
        return result
    if not ((G.mul(xs, G.inv(xs)) == e).all() and (G.mul(G.inv(xs), xs) == e).all()):
        result.update(ok=False, witness={"axiom": "inverse"})
        return result
    if n <= exhaustive_limit:
        a, b, c = xs[:, None, None], xs[None, :, None], xs[None, None, :]
        bad = G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))
        triples = n**3
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        bad = G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c))
        triples = samples
    result["triples"] = int(triples)
    if bad.any():
        idx = np.argwhere(bad)[0]
        result.update(ok=False, witness={"axiom": "associativity", "at": [int(i) for i in idx]})
    return result


# -- construction helpers ----------------------------------------------------


def bfs_closure(
    identity: Hashable,
    gens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    max_order: int = DEFAULT_MAX_ORDER,
):
    """Enumerate the group generated by ``gens`` breadth-first.

    Returns ``(elements, parent, via, right)`` where
    ``elements[j] = elements[parent[j]] * gens[via[j]]`` and ``right[k][i]``
    is the id of ``elements[i] * gens[k]``.
    """
    elements = [identity]
    index = {identity: 0}
    parent = [-1]
    via = [-1]
    right: list[list[int]] = [[] for _ in gens]
    i = 0
    while i < len(elements):
        cur = elements[i]
        for k, g in enumerate(gens):
            p = mul(cur, g)
            j = index.get(p)
            if j is None:
                j = len(elements)
                if j >= max_order:
                    raise OrderCapExceeded(j + 1, max_order)
                index[p] = j
                elements.append(p)
                parent.append(i)
                via.append(k)
            right[k].append(j)
        i += 1
    return elements, parent, via, right


def table_from_right_maps(parent: Sequence[int], via: Sequence[int], right: Sequence[Sequence[int]]) -> np.ndarray:
    """Fill a multiplication table column by column from right-multiplication maps."""
    n = len(parent)
    maps = [np.asarray(r, dtype=np.intp) for r in right]
    table = np.empty((n, n), dtype=np.intp)
    table[:, 0] = np.arange(n)
    for j in range(1, n):
        table[:, j] = maps[via[j]][table[:, parent[j]]]
    return table


def _compose_bytes(a: bytes, b: bytes) -> bytes:
    pa = np.frombuffer(a, dtype=np.intp)
    pb = np.frombuffer(b, dtype=np.intp)
    return pb[pa].tobytes()


def compose(p: Sequence[int], q: Sequence[int]) -> list[int]:
    """Product ``p*q`` of image lists: apply ``p`` first, then ``q``."""
    return [q[i] for i in p]


def cycles_to_images(cycles: Sequence[Sequence[int]], degree: int) -> list[int]:
    """Image list (0-based) of a product of disjoint cycles given 1-based."""
    images = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            if not (1 <= a <= degree):
                raise GroupSpecError(f"point {a} outside 1..{degree}")
            images[a - 1] = b - 1
    if sorted(images) != list(range(degree)):
        raise GroupSpecError(f"cycles {cycles} do not describe a permutation")
    return images


def parse_cycles(text: str, degree: int) -> list[int]:
    """Read cycle notation like ``(1,2,3)(4,5)`` or ``(1 2)``; ``()`` is the identity."""
    s = text.replace(" ", ",")
    if not s.startswith("(") or not s.endswith(")"):
        raise GroupSpecError(f"bad cycle notation {text!r}")
    cycles = []
    for part in s[1:-1].split(")("):
        pts = [p for p in part.split(",") if p]
        try:
            cycles.append([int(p) for p in pts])
        except ValueError:
            raise GroupSpecError(f"bad cycle notation {text!r}") from None
    images = list(range(degree))
    # cycles are composed left to right, matching the product convention
    for cyc in cycles:
        if not cyc:
            continue
        if len(set(cyc)) != len(cyc):
            raise GroupSpecError(f"repeated point in cycle {cyc}")
        images = compose(images, cycles_to_images([cyc], degree))
    return images


def format_cycles(images: Sequence[int]) -> str:
    """1-based disjoint cycle notation; the identity prints as ``()``."""
    seen = set()
    out = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = int(images[start])
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = int(images[j])
        out.append("(" + ",".join(str(c + 1) for c in cyc) + ")")
    return "".join(out) or "()"
