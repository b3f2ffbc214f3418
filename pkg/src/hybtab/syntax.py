"""Formula language for two-dimensional hybrid product logic.

Surface syntax (ASCII), precedence from loosest to tightest::

    <->   ->   |   &   prefix operators (~ <1> <2> [1] [2] @iN @aN)

``&``, ``|`` and ``<->`` associate to the left, ``->`` to the right.
Atoms are ``p<digits>`` (propositions), ``i<digits>`` (first-dimension
nominals) and ``a<digits>`` (second-dimension nominals).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterator, Union


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Prop(Atom):
    pass


@dataclass(frozen=True, slots=True)
class Nom1(Atom):
    pass


@dataclass(frozen=True, slots=True)
class Nom2(Atom):
    pass


Nominal = Union[Nom1, Nom2]


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Dia(Formula):
    dim: int
    arg: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    dim: int
    arg: Formula


@dataclass(frozen=True, slots=True)
class At(Formula):
    nominal: Atom
    arg: Formula

    def __post_init__(self) -> None:
        if not isinstance(self.nominal, (Nom1, Nom2)):
            raise NamespaceError(f"@ requires a nominal, got {self.nominal.name!r}")


BINARY = (And, Or, Implies, Iff)
CORE = (Prop, Nom1, Nom2, Not, And, Dia, At)


class ParseError(ValueError):
    """Malformed formula text."""

    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(detail)


class NamespaceError(ValueError):
    """An @ prefix names something that is not a nominal."""


def atom(name: str) -> Atom:
    """Build an atom from its surface name; the prefix fixes its namespace."""
    m = re.fullmatch(r"([pia])(\d+)", name)
    if not m:
        raise ValueError(f"not an atom name: {name!r}")
    return {"p": Prop, "i": Nom1, "a": Nom2}[m.group(1)](name)


# --- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<dia><[12]>)
  | (?P<box>\[[12]\])
  | (?P<at>@\s*[A-Za-z_]\w*)
  | (?P<atom>[A-Za-z_]\w*)
  | (?P<op>[~&|()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            toks.append(_Tok(kind if kind != "op" else chunk, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    col = pos - line_start + 1
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: frozenset[str]) -> ParseError:
        tok = self.peek()
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"unexpected {what}", tok.line, tok.col, expected)

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek().kind != "eof":
            raise self.fail(frozenset({"<->", "->", "|", "&", "end of input"}))
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek().kind == "iff":
            self.advance()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek().kind == "imp":
            self.advance()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "|":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "&":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "~":
            self.advance()
            return Not(self.unary())
        if tok.kind == "dia":
            self.advance()
            return Dia(int(tok.text[1]), self.unary())
        if tok.kind == "box":
            self.advance()
            return Box(int(tok.text[1]), self.unary())
        if tok.kind == "at":
            self.advance()
            name = tok.text[1:].strip()
            target = self._atom(name, tok)
            if isinstance(target, Prop):
                raise NamespaceError(
                    f"@ requires a nominal, got proposition {name!r} "
                    f"at line {tok.line}, column {tok.col}"
                )
            return At(target, self.unary())
        if tok.kind == "atom":
            self.advance()
            return self._atom(tok.text, tok)
        if tok.kind == "(":
            self.advance()
            f = self.iff()
            if self.peek().kind != ")":
                raise self.fail(frozenset({")", "<->", "->", "|", "&"}))
            self.advance()
            return f
        raise self.fail(frozenset({"~", "<1>", "<2>", "[1]", "[2]", "@i<n>", "@a<n>", "(", "atom"}))

    @staticmethod
    def _atom(name: str, tok: _Tok) -> Atom:
        try:
            return atom(name)
        except ValueError:
            raise ParseError(
                f"bad atom {name!r} (use p<n>, i<n> or a<n>)", tok.line, tok.col,
                frozenset({"p<n>", "i<n>", "a<n>"}),
            ) from None


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 5)


def print_formula(f: Formula) -> str:
    """Canonical surface text with the fewest parentheses that re-parse to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "~" + _operand(f.arg)
    if isinstance(f, Dia):
        return f"<{f.dim}>" + _operand(f.arg)
    if isinstance(f, Box):
        return f"[{f.dim}]" + _operand(f.arg)
    if isinstance(f, At):
        return f"@{f.nominal.name} " + _operand(f.arg)
    p = _PREC[type(f)]
    left, right = print_formula(f.left), print_formula(f.right)
    if isinstance(f, Implies):
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {_SYM[type(f)]} {right}"


def _operand(f: Formula) -> str:
    s = print_formula(f)
    return s if _prec(f) == 5 else f"({s})"


# --- desugaring and structure ---------------------------------------------

def desugar(f: Formula) -> Formula:
    """Rewrite to the primitive connectives ~, &, <k>, @."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Not(And(Not(desugar(f.left)), Not(desugar(f.right))))
    if isinstance(f, Implies):
        return Not(And(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Iff):
        return desugar(And(Implies(f.left, f.right), Implies(f.right, f.left)))
    if isinstance(f, Dia):
        return Dia(f.dim, desugar(f.arg))
    if isinstance(f, Box):
        return Not(Dia(f.dim, Not(desugar(f.arg))))
    if isinstance(f, At):
        return At(f.nominal, desugar(f.arg))
    raise TypeError(f"not a formula: {f!r}")


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Atom):
        return ()
    if isinstance(f, (Not, Dia, Box)):
        return (f.arg,)
    if isinstance(f, At):
        return (f.nominal, f.arg)
    return (f.left, f.right)


def is_core(f: Formula) -> bool:
    return isinstance(f, CORE) and all(is_core(c) for c in children(f))


def subformulas(f: Formula) -> set[Formula]:
    """All subformulas of ``f``, including ``f`` itself.

    The nominal of an ``@`` prefix counts as a subformula, as it is a
    formula of the language in its own right.
    """
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g not in out:
            out.add(g)
            stack.extend(children(g))
    return out


def size(f: Formula) -> int:
    """Number of AST nodes; the nominal of an @ prefix is part of its node."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, At):
        return 1 + size(f.arg)
    return 1 + sum(size(c) for c in children(f))


def iter_atoms(f: Formula) -> Iterator[Atom]:
    """Atoms of ``f`` in left-to-right textual order (with repeats)."""
    if isinstance(f, Atom):
        yield f
        return
    for c in children(f):
        yield from iter_atoms(c)


def nominals(f: Formula) -> list[Nominal]:
    """Distinct nominals of ``f`` in order of first textual occurrence."""
    seen: dict[Atom, None] = {}
    for a in iter_atoms(f):
        if isinstance(a, (Nom1, Nom2)):
            seen.setdefault(a)
    return list(seen)


def atoms(f: Formula) -> set[Atom]:
    return set(iter_atoms(f))


# --- nominal bookkeeping ---------------------------------------------------

class NominalAllocator:
    """Hands out fresh ``iN`` / ``aN`` names that avoid a reserved set."""

    def __init__(self, reserved=()):
        self.reserved = {a.name if isinstance(a, Atom) else a for a in reserved}
        self.next_index = {1: 0, 2: 0}
        self.allocated = {1: 0, 2: 0}

    def reserve(self, names) -> None:
        for a in names:
            self.reserved.add(a.name if isinstance(a, Atom) else a)

    def fresh(self, dim: int) -> Nominal:
        prefix, cls = ("i", Nom1) if dim == 1 else ("a", Nom2)
        k = self.next_index[dim]
        while f"{prefix}{k}" in self.reserved:
            k += 1
        self.next_index[dim] = k + 1
        name = f"{prefix}{k}"
        self.reserved.add(name)
        self.allocated[dim] += 1
        return cls(name)


class IntroductionOrder:
    """Ranks nominals by first appearance; ties inside one formula break left to right."""

    def __init__(self, ranks: dict[Atom, int] | None = None):
        self.ranks: dict[Atom, int] = dict(ranks or {})

    def copy(self) -> IntroductionOrder:
        return IntroductionOrder(self.ranks)

    def note(self, noms) -> None:
        for n in noms:
            if n not in self.ranks:
                self.ranks[n] = len(self.ranks)

    def rank(self, n: Atom) -> int:
        return self.ranks[n]

    def min(self, noms) -> Atom:
        return min(noms, key=self.ranks.__getitem__)

    def __contains__(self, n: Atom) -> bool:
        return n in self.ranks


# --- random formulas -------------------------------------------------------

@dataclass(frozen=True)
class Vocab:
    props: int = 2
    nom1: int = 2
    nom2: int = 2

    def prop_atoms(self) -> list[Prop]:
        return [Prop(f"p{k}") for k in range(1, self.props + 1)]

    def nom1_atoms(self) -> list[Nom1]:
        return [Nom1(f"i{k}") for k in range(1, self.nom1 + 1)]

    def nom2_atoms(self) -> list[Nom2]:
        return [Nom2(f"a{k}") for k in range(1, self.nom2 + 1)]


def random_formula(seed: int, max_size: int, vocab: Vocab = Vocab()) -> Formula:
    """A surface formula with at most ``max_size`` nodes, drawn deterministically from ``seed``."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    rng = random.Random(seed)
    leaves: list[Atom] = [*vocab.prop_atoms(), *vocab.nom1_atoms(), *vocab.nom2_atoms()]
    if not leaves:
        raise ValueError("vocabulary is empty")
    prefixes: list[Atom] = [*vocab.nom1_atoms(), *vocab.nom2_atoms()]
    return _grow(rng, rng.randint(1, max_size), leaves, prefixes)


def _grow(rng: random.Random, budget: int, leaves: list[Atom], prefixes: list[Atom]) -> Formula:
    if budget == 1:
        return rng.choice(leaves)
    kinds = ["not", "dia", "box"] + (["at"] if prefixes else [])
    if budget >= 3:
        kinds += ["and", "and", "or", "imp", "iff"]
    kind = rng.choice(kinds)
    if kind in ("not", "dia", "box", "at"):
        sub = _grow(rng, budget - 1, leaves, prefixes)
        if kind == "not":
            return Not(sub)
        if kind == "at":
            return At(rng.choice(prefixes), sub)
        return (Dia if kind == "dia" else Box)(rng.randint(1, 2), sub)
    left = rng.randint(1, budget - 2)
    l = _grow(rng, left, leaves, prefixes)
    r = _grow(rng, budget - 1 - left, leaves, prefixes)
    return {"and": And, "or": Or, "imp": Implies, "iff": Iff}[kind](l, r)
