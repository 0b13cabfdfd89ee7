"""Group words: syntax tree, parser, free reduction and evaluation.

Grammar (whitespace is ignored)::

    word   := term (('*')? term)*
    term   := atom ('^' ['-'] digits)*
    atom   := 'x' digits | '1' | '(' word ')' | '[' word (',' word)+ ']'

Variables are ``x1`` .. ``x99``. ``[u, v, w]`` is the left-normed commutator
``[[u, v], w]``. A negative power ``u^-k`` is read as ``(u^k)^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .errors import MissingBindingError, ParentMismatchError, WordSyntaxError
from .group import GroupElement

MAX_VARIABLE = 99


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Inverse:
    arg: "Node"


@dataclass(frozen=True)
class Power:
    arg: "Node"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Commutator:
    args: tuple


Node = Union[Var, Identity, Inverse, Power, Product, Commutator]


def variables(node: Node) -> frozenset[int]:
    if isinstance(node, Var):
        return frozenset((node.index,))
    if isinstance(node, Identity):
        return frozenset()
    if isinstance(node, (Inverse, Power)):
        return variables(node.arg)
    children = node.factors if isinstance(node, Product) else node.args
    out: frozenset[int] = frozenset()
    for c in children:
        out |= variables(c)
    return out


def letters(node: Node) -> tuple[int, ...]:
    """Expand to a freely reduced letter sequence; ``-i`` stands for ``x_i^-1``."""
    if isinstance(node, Var):
        return (node.index,)
    if isinstance(node, Identity):
        return ()
    if isinstance(node, Inverse):
        return _inv_letters(letters(node.arg))
    if isinstance(node, Power):
        base = letters(node.arg)
        if node.exponent < 0:
            base = _inv_letters(base)
        return _reduce(base * abs(node.exponent))
    if isinstance(node, Product):
        out: tuple[int, ...] = ()
        for f in node.factors:
            out = _reduce(out + letters(f))
        return out
    acc = letters(node.args[0])
    for a in node.args[1:]:
        b = letters(a)
        acc = _reduce(_inv_letters(acc) + _inv_letters(b) + acc + b)
    return acc


def _inv_letters(seq: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-c for c in reversed(seq))


def _reduce(seq) -> tuple[int, ...]:
    stack: list[int] = []
    for c in seq:
        if stack and stack[-1] == -c:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def _syllables_to_node(seq: Sequence[int]) -> Node:
    parts: list[Node] = []
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        var, k = abs(seq[i]), (j - i) * (1 if seq[i] > 0 else -1)
        parts.append(_power_node(Var(var), k))
        i = j
    if not parts:
        return Identity()
    if len(parts) == 1:
        return parts[0]
    return Product(tuple(parts))


def _power_node(base: Node, k: int) -> Node:
    if k == 1:
        return base
    if k == -1:
        return Inverse(base)
    if k < 0:
        return Inverse(Power(base, -k))
    return Power(base, k)


# -- printing ---------------------------------------------------------------


def to_text(node: Node) -> str:
    if isinstance(node, Var):
        return f"x{node.index}"
    if isinstance(node, Identity):
        return "1"
    if isinstance(node, Inverse):
        if isinstance(node.arg, Power) and node.arg.exponent > 1:
            return f"{_atom_text(node.arg.arg)}^-{node.arg.exponent}"
        return f"{_atom_text(node.arg)}^-1"
    if isinstance(node, Power):
        return f"{_atom_text(node.arg)}^{node.exponent}"
    if isinstance(node, Product):
        return "*".join(_factor_text(f) for f in node.factors)
    return "[" + ",".join(to_text(a) for a in node.args) + "]"


def _atom_text(node: Node) -> str:
    if isinstance(node, (Var, Identity, Commutator)):
        return to_text(node)
    return f"({to_text(node)})"


def _factor_text(node: Node) -> str:
    return f"({to_text(node)})" if isinstance(node, Product) else to_text(node)


# -- the Word value ---------------------------------------------------------


class Word:
    """An immutable group word with its syntax tree and reduced letters.

    ``arity`` is the number of variable slots ``x1 .. xn``; by default the
    largest index that occurs.
    """

    __slots__ = ("ast", "arity", "_letters", "_text")

    def __init__(self, ast: Node, arity: int | None = None) -> None:
        used = variables(ast)
        top = max(used, default=0)
        if arity is None:
            arity = top
        if top > arity:
            raise ValueError(f"variable x{top} exceeds arity {arity}")
        self.ast = ast
        self.arity = arity
        self._letters: tuple[int, ...] | None = None
        self._text: str | None = None

    @property
    def letters(self) -> tuple[int, ...]:
        if self._letters is None:
            self._letters = letters(self.ast)
        return self._letters

    @property
    def variables(self) -> frozenset[int]:
        return variables(self.ast)

    def __str__(self) -> str:
        if self._text is None:
            self._text = to_text(self.ast)
        return self._text

    def __repr__(self) -> str:
        return f"Word({str(self)!r}, arity={self.arity})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.ast == other.ast and self.arity == other.arity

    def __hash__(self) -> int:
        return hash((self.ast, self.arity))


def free_reduce(w: Word) -> Word:
    """Freely reduced form as a product of syllables ``x_i^k``; keeps the arity."""
    return Word(_syllables_to_node(w.letters), arity=w.arity)


def append_commutator_variables(w: Word, m: int) -> Word:
    """``[w, x_{n+1}, ..., x_{n+m}]`` with ``n = arity(w)``; ``m = 0`` returns ``w``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return w
    n = w.arity
    return Word(Commutator((w.ast,) + tuple(Var(n + i) for i in range(1, m + 1))), arity=n + m)


# -- evaluation ----------------------------------------------------------------


def _binding(assignment, i: int):
    try:
        if isinstance(assignment, Mapping):
            if i in assignment:
                return assignment[i]
            return assignment[f"x{i}"]
        if i - 1 < len(assignment):
            return assignment[i - 1]
    except KeyError:
        pass
    raise MissingBindingError(f"no value bound to x{i}")


def _value(v, G):
    if isinstance(v, GroupElement):
        if v.group is not G:
            raise ParentMismatchError(f"{v!r} does not belong to {G.name}")
        return v.id
    return v


def evaluate_node(node: Node, G, assignment):
    """Structural evaluation; values may be ids or broadcastable id arrays."""
    if isinstance(node, Var):
        return _value(_binding(assignment, node.index), G)
    if isinstance(node, Identity):
        return G.identity
    if isinstance(node, Inverse):
        return G.inv(evaluate_node(node.arg, G, assignment))
    if isinstance(node, Power):
        return G.power(evaluate_node(node.arg, G, assignment), node.exponent)
    if isinstance(node, Product):
        acc = evaluate_node(node.factors[0], G, assignment)
        for f in node.factors[1:]:
            acc = G.mul(acc, evaluate_node(f, G, assignment))
        return acc
    acc = evaluate_node(node.args[0], G, assignment)
    for a in node.args[1:]:
        acc = G.comm(acc, evaluate_node(a, G, assignment))
    return acc


def evaluate(w: Word, G, assignment):
    """Value ``w(g_1, ..., g_n)`` in ``G``.

    ``assignment`` is a sequence (``x_i`` is item ``i-1``) or a mapping keyed
    by ``i`` or ``"xi"``. Values are ids, id arrays or ``GroupElement``.
    """
    for i in w.variables:
        _binding(assignment, i)
    return evaluate_node(w.ast, G, assignment)


def evaluate_letters(w: Word, G, assignment):
    """Evaluate by multiplying out the flattened reduced letter sequence."""
    acc = G.identity
    inverses: dict[int, object] = {}
    for c in w.letters:
        v = _value(_binding(assignment, abs(c)), G)
        if c < 0:
            if c not in inverses:
                inverses[c] = G.inv(v)
            v = inverses[c]
        acc = G.mul(acc, v)
    return acc


# -- parser -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise WordSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def digits(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits")
        return int(self.text[start : self.pos])

    def word(self) -> Node:
        factors = [self.term()]
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                factors.append(self.term())
            elif ch and (ch in "x([" or ch == "1"):
                factors.append(self.term())
            else:
                break
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def term(self) -> Node:
        node = self.atom()
        while self.peek() == "^":
            self.pos += 1
            neg = False
            if self.peek() == "-":
                neg = True
                self.pos += 1
            elif self.peek() == "+":
                self.pos += 1
            k = self.digits()
            node = _power_node(node, -k) if neg else Power(node, k)
        return node

    def atom(self) -> Node:
        ch = self.peek()
        start = self.pos
        if ch == "x":
            self.pos += 1
            if not (self.pos < len(self.text) and self.text[self.pos].isdigit()):
                self.error("expected variable index after 'x'")
            i = self.digits()
            if i == 0:
                self.error("variable index 0 is not allowed (variables are x1..x99)", start)
            if i > MAX_VARIABLE:
                self.error(f"variable index {i} is above {MAX_VARIABLE}", start)
            return Var(i)
        if ch == "1":
            self.pos += 1
            return Identity()
        if ch == "(":
            self.pos += 1
            node = self.word()
            self.expect(")")
            return node
        if ch == "[":
            self.pos += 1
            args = [self.word()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.word())
            if len(args) < 2:
                self.error("a commutator needs at least two entries")
            self.expect("]")
            return Commutator(tuple(args))
        self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")


def parse_word(text: str) -> Word:
    """Parse ``text`` into a :class:`Word`; raises :class:`WordSyntaxError`."""
    p = _Parser(text)
    if not p.peek():
        p.error("empty word")
    node = p.word()
    if p.peek():
        p.error(f"unexpected {p.peek()!r}")
    return Word(node)


# -- formal products over a fixed list ---------------------------------------------


@dataclass(frozen=True)
class FormalProduct:
    """A formal product ``b_{i_1} ... b_{i_j}`` of 1-based indices into a list of length ``r``."""

    factors: tuple[int, ...]
    r: int

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("a formal product has at least one factor")
        if not all(1 <= i <= self.r for i in self.factors):
            raise ValueError(f"indices must lie in 1..{self.r}")

    def key(self) -> tuple:
        """Sort key realising :func:`formal_product_less`."""
        return (len(self.factors), self.factors[::-1])

    def __lt__(self, other: "FormalProduct") -> bool:
        return formal_product_less(self, other)


def formal_product_less(p: FormalProduct, q: FormalProduct) -> bool:
    """Shorter products come first; equal lengths compare at the rightmost differing index."""
    if p.r != q.r:
        raise ValueError("formal products over different lists")
    return p.key() < q.key()
