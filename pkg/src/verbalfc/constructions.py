"""Named group families, direct products and the wreath product ``A wr C2``.

Group specs are written in a small language::

    C12   cyclic of order 12          D4    dihedral of order 8
    S4    symmetric on 4 points       A5    alternating on 5 points
    Q8    quaternion group            C3xS3 direct product
    wr2(C3)  wreath product C3 wr C2  @file.json  group definition file

``Dn`` always has order ``2n``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GroupSpecError, OrderCapExceeded
from .group import (
    DEFAULT_MAX_ORDER,
    TABLE_LIMIT,
    FiniteGroup,
    GroupElement,
    PermutationGroup,
    cycles_to_images,
)

WREATH_TABLE_LIMIT = 64


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int = 0
    parts: tuple["GroupSpec", ...] = ()
    path: str = ""

    def __str__(self) -> str:
        if self.kind in _LETTER:
            return f"{_LETTER[self.kind]}{self.n}"
        if self.kind == "quaternion8":
            return "Q8"
        if self.kind == "direct-product":
            return "x".join(f"({p})" if p.kind == "direct-product" else str(p) for p in self.parts)
        if self.kind == "wreath-c2":
            return f"wr2({self.parts[0]})"
        return f"@{self.path}"


_LETTER = {"cyclic": "C", "dihedral": "D", "symmetric": "S", "alternating": "A"}
_KIND = {v: k for k, v in _LETTER.items()}


class _SpecParser:
    def __init__(self, text: str) -> None:
        self.text = text.replace(" ", "")
        self.pos = 0

    def fail(self, msg: str):
        raise GroupSpecError(f"{msg} in group spec {self.text!r} at position {self.pos}")

    def spec(self) -> GroupSpec:
        parts = [self.factor()]
        while self.pos < len(self.text) and self.text[self.pos] == "x":
            self.pos += 1
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else GroupSpec("direct-product", parts=tuple(parts))

    def factor(self) -> GroupSpec:
        t = self.text[self.pos :]
        if t.startswith("wr2("):
            self.pos += 4
            inner = self.spec()
            self.close()
            return GroupSpec("wreath-c2", parts=(inner,))
        if t.startswith("("):
            self.pos += 1
            inner = self.spec()
            self.close()
            return inner
        if t.startswith("@"):
            depth, end = 0, len(self.text)
            for i in range(self.pos, len(self.text)):
                if self.text[i] == "(":
                    depth += 1
                elif self.text[i] == ")":
                    if depth == 0:
                        end = i
                        break
                    depth -= 1
            path = self.text[self.pos + 1 : end]
            if not path:
                self.fail("missing file path")
            self.pos = end
            return GroupSpec("file", path=path)
        if t.startswith("Q8"):
            self.pos += 2
            return GroupSpec("quaternion8")
        m = re.match(r"([CDSA])(\d+)", t)
        if not m:
            self.fail("unknown group family")
        self.pos += m.end()
        n = int(m.group(2))
        if n < 1:
            self.fail("family index must be positive")
        return GroupSpec(_KIND[m.group(1)], n=n)

    def close(self) -> None:
        if self.pos >= len(self.text) or self.text[self.pos] != ")":
            self.fail("expected ')'")
        self.pos += 1


def parse_spec(text: str) -> GroupSpec:
    p = _SpecParser(text)
    if not p.text:
        raise GroupSpecError("empty group spec")
    spec = p.spec()
    if p.pos != len(p.text):
        p.fail("unexpected trailing text")
    return spec


def predicted_order(spec: GroupSpec) -> int | None:
    """Order from the family formula, or ``None`` for files."""
    if spec.kind == "cyclic":
        return spec.n
    if spec.kind == "dihedral":
        return 2 * spec.n
    if spec.kind == "symmetric":
        return math.factorial(spec.n)
    if spec.kind == "alternating":
        return max(1, math.factorial(spec.n) // 2)
    if spec.kind == "quaternion8":
        return 8
    if spec.kind == "direct-product":
        orders = [predicted_order(p) for p in spec.parts]
        return None if None in orders else math.prod(orders)
    if spec.kind == "wreath-c2":
        a = predicted_order(spec.parts[0])
        return None if a is None else 2 * a * a
    return None


def build(spec: GroupSpec | str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Construct the group described by ``spec``."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    order = predicted_order(spec)
    if order is not None and order > max_order:
        raise OrderCapExceeded(order, max_order)
    name = str(spec)
    k = spec.kind
    if k == "cyclic":
        return cyclic(spec.n)
    if k == "dihedral":
        return dihedral(spec.n)
    if k == "symmetric":
        return symmetric(spec.n)
    if k == "alternating":
        return alternating(spec.n)
    if k == "quaternion8":
        return quaternion8()
    if k == "direct-product":
        groups = [build(p, max_order) for p in spec.parts]
        G = groups[0]
        for H in groups[1:]:
            G = direct_product(G, H, max_order=max_order)
        G.name = name
        return G
    if k == "wreath-c2":
        return wreath_c2(build(spec.parts[0], max_order), max_order=max_order)
    return load_group_file(spec.path, max_order=max_order)


# -- families ----------------------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    """``C_n = <r>``, element ``k`` is ``r^k``."""
    i = np.arange(n)
    labels = ["1", "r"] + [f"r^{k}" for k in range(2, n)]
    return FiniteGroup((i[:, None] + i[None, :]) % n, name=f"C{n}", generators=[1] if n > 1 else [], labels=labels[:n])


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``; generators are the rotation ``r`` then a reflection ``s``."""
    if n >= 3:
        rot = [(i + 1) % n for i in range(n)]
        ref = [(-i) % n for i in range(n)]
        return PermutationGroup([rot, ref], degree=n, name=f"D{n}")
    # elements r^k s^e stored as 2k + e
    N = 2 * n
    k, e = np.arange(N) // 2, np.arange(N) % 2
    k1, e1, k2, e2 = k[:, None], e[:, None], k[None, :], e[None, :]
    kk = (k1 + np.where(e1 == 1, -k2, k2)) % n
    table = 2 * kk + (e1 ^ e2)
    labels = [("r" if kk_ else "") + ("s" if ee else "") or "1" for kk_, ee in zip(k, e)]
    gens = ([2] if n > 1 else []) + [1]
    return FiniteGroup(table, name=f"D{n}", generators=gens, labels=labels)


def symmetric(n: int) -> FiniteGroup:
    gens = []
    if n >= 2:
        gens.append(cycles_to_images([list(range(1, n + 1))], n))
    if n >= 3:
        gens.append(cycles_to_images([[1, 2]], n))
    return PermutationGroup(gens, degree=n, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = [cycles_to_images([[1, 2, k]], n) for k in range(3, n + 1)]
    return PermutationGroup(gens, degree=n, name=f"A{n}")


def quaternion8() -> FiniteGroup:
    """``Q8 = {+-1, +-i, +-j, +-k}``; id ``2u + s`` is ``(-1)^s`` times unit ``u`` of ``(1, i, j, k)``."""
    # unit products: unit_mul[u][v] = (sign, unit)
    unit_mul = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    table = np.empty((8, 8), dtype=np.intp)
    for a in range(8):
        for b in range(8):
            s, u = unit_mul[(a // 2, b // 2)]
            table[a, b] = 2 * u + ((a % 2) ^ (b % 2) ^ s)
    names = ["1", "i", "j", "k"]
    labels = [("-" if s else "") + names[u] for u in range(4) for s in range(2)]
    return FiniteGroup(table, name="Q8", generators=[2, 4], labels=labels)


# -- combinators ----------------------------------------------------------------


def permutation_generators(G: FiniteGroup) -> tuple[list[list[int]], int]:
    """Generators of a faithful permutation action: the natural one for
    permutation groups, the right regular action otherwise."""
    if isinstance(G, PermutationGroup):
        return [G.perms[g].tolist() for g in G.generators], G.degree
    if G.table is None:
        raise GroupSpecError(f"{G.name} has neither a table nor permutations")
    return [G.table[:, g].tolist() for g in G.generators], G.order


def _perm_element_id(G: FiniteGroup, images) -> int:
    if isinstance(G, PermutationGroup):
        return G.perm_id(images)
    return int(images[G.identity])


def direct_product(G: FiniteGroup, H: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """``G x H``; with a table, element ``(g, h)`` has id ``g*|H| + h``."""
    N = G.order * H.order
    if N > max_order:
        raise OrderCapExceeded(N, max_order)
    name = f"{G.name}x{H.name}"
    if N <= TABLE_LIMIT and G.table is not None and H.table is not None:
        nH = H.order
        table = (G.table[:, None, :, None] * nH + H.table[None, :, None, :]).reshape(N, N)
        labels = [f"({G.label(g)},{H.label(h)})" for g in range(G.order) for h in range(nH)]
        gens = [g * nH + H.identity for g in G.generators] + [G.identity * nH + h for h in H.generators]
        return FiniteGroup(table, name=name, generators=gens, labels=labels)
    pg, dg = permutation_generators(G)
    ph, dh = permutation_generators(H)
    gens = [p + list(range(dg, dg + dh)) for p in pg] + [list(range(dg)) + [dg + i for i in p] for p in ph]
    return PermutationGroup(gens, degree=dg + dh, name=name, max_order=max_order)


class WreathC2(FiniteGroup):
    """``A wr C2 = (A x A) : <b>`` where ``b`` swaps the two coordinates.

    Elements are triples ``((a1, a2), e)``; ``((a1, a2), 0) * ((c1, c2), d)``
    is ``((a1 c1, a2 c2), d)`` and ``b`` conjugates ``((a, 1), 0)`` to ``((1, a), 0)``.
    Realised as a Cayley table with id ``2(a1 |A| + a2) + e`` for ``|A| <= 64``
    and as permutations on two copies of a faithful action of ``A`` above.
    """

    def __init__(self, A: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> None:
        nA = A.order
        N = 2 * nA * nA
        if N > max_order:
            raise OrderCapExceeded(N, max_order)
        self.base = A
        name = f"wr2({A.name})"
        if nA <= WREATH_TABLE_LIMIT and A.table is not None:
            self._perm = None
            ids = np.arange(N)
            e = ids % 2
            a1, a2 = (ids // 2) // nA, (ids // 2) % nA
            L1, L2, Le = a1[:, None], a2[:, None], e[:, None]
            R1, R2, Re = a1[None, :], a2[None, :], e[None, :]
            c1 = np.where(Le == 1, R2, R1)
            c2 = np.where(Le == 1, R1, R2)
            table = 2 * (A.table[L1, c1] * nA + A.table[L2, c2]) + (Le ^ Re)
            labels = [f"(({A.label(x)},{A.label(y)}),{z})" for x, y, z in zip(a1, a2, e)]
            self._setup(np.ascontiguousarray(table), N, name, labels)
            self.generators = tuple(self.element_id(g, A.identity, 0) for g in A.generators) + (
                self.element_id(A.identity, A.identity, 1),
            )
            return
        pa, d = permutation_generators(A)
        swap = list(range(d, 2 * d)) + list(range(d))
        gens = [p + list(range(d, 2 * d)) for p in pa] + [swap]
        self._perm = PermutationGroup(gens, degree=2 * d, name=name, max_order=max_order)
        P = self._perm
        self.table, self.order, self.name = P.table, P.order, name
        self._labels, self.identity, self._inv = None, P.identity, P._inv
        self._d = d
        self.generators = P.generators

    def mul(self, a, b):
        if self._perm is not None:
            return self._perm.mul(a, b)
        return self.table[a, b]

    def element_id(self, a1: int, a2: int, e: int) -> int:
        """Id of ``((a1, a2), e)``."""
        if self._perm is None:
            return 2 * (int(a1) * self.base.order + int(a2)) + int(e)
        d, A = self._d, self.base
        p1 = self._action(a1)
        p2 = [d + i for i in self._action(a2)]
        images = p1 + p2
        if e:
            images = [(i + d) % (2 * d) for i in images]
        return self._perm.perm_id(images)

    def coords(self, g: int) -> tuple[int, int, int]:
        """``(a1, a2, e)`` with ``g = ((a1, a2), e)``."""
        if self._perm is None:
            return (int(g) // 2) // self.base.order, (int(g) // 2) % self.base.order, int(g) % 2
        d = self._d
        images = self._perm.perms[int(g)].tolist()
        e = int(images[0] >= d)
        if e:
            images = [(i + d) % (2 * d) for i in images]
        a1 = _perm_element_id(self.base, images[:d])
        a2 = _perm_element_id(self.base, [i - d for i in images[d:]])
        return a1, a2, e

    def _action(self, a: int) -> list[int]:
        A = self.base
        if isinstance(A, PermutationGroup):
            return A.perms[int(a)].tolist()
        return A.table[:, int(a)].tolist()

    def label(self, g: int) -> str:
        if self._labels is not None:
            return self._labels[int(g)]
        a1, a2, e = self.coords(g)
        return f"(({self.base.label(a1)},{self.base.label(a2)}),{e})"

    @property
    def swap(self) -> int:
        return self.element_id(self.base.identity, self.base.identity, 1)


def wreath_c2(A: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> WreathC2:
    return WreathC2(A, max_order=max_order)


def wreath_swap_element(G: FiniteGroup) -> GroupElement:
    """The involution ``b = ((1, 1), 1)`` of a wreath product ``A wr C2``."""
    if not isinstance(G, WreathC2):
        raise TypeError(f"{G.name} was not built as a wreath product with C2")
    return G.element(G.swap)


# -- files -------------------------------------------------------------------------


def group_from_json(data: dict, name: str = "G", max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Build a group from a parsed definition file."""
    if not isinstance(data, dict) or "type" not in data:
        raise GroupSpecError("group file must be a JSON object with a 'type' field")
    kind = data["type"]
    name = data.get("name", name)
    if kind == "cayley":
        table = data.get("table")
        if not isinstance(table, list) or not table or any(not isinstance(r, list) or len(r) != len(table) for r in table):
            raise GroupSpecError("'table' must be a square list of lists")
        if len(table) > max_order:
            raise OrderCapExceeded(len(table), max_order)
        G = FiniteGroup(table, name=name)
        from .group import check_axioms

        if not check_axioms(G)["ok"]:
            raise GroupSpecError("table does not satisfy the group axioms")
        return G
    if kind == "perm":
        degree = data.get("degree")
        gens = data.get("generators")
        if not isinstance(degree, int) or degree < 1 or not isinstance(gens, list):
            raise GroupSpecError("perm group needs integer 'degree' and list 'generators'")
        return PermutationGroup(gens, degree=degree, name=name, max_order=max_order)
    if kind == "named":
        G = build(str(data.get("name", "")), max_order=max_order)
        return G
    raise GroupSpecError(f"unknown group file type {kind!r}")


def load_group_file(path: str | Path, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise GroupSpecError(f"cannot read group file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise GroupSpecError(f"group file {path} is not valid JSON: {exc}") from None
    G = group_from_json(data, name=p.stem, max_order=max_order)
    if data.get("type") != "named":
        G.name = f"@{path}"
    return G
