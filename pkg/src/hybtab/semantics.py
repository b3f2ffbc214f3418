"""Finite product and dependent-product Kripke models and their satisfaction relation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from .syntax import (
    And, Atom, At, Box, Dia, Formula, Iff, Implies, Nom1, Nom2, Not, Or, Prop, atoms,
)

Pair = tuple[str, str]


class WorldPair(NamedTuple):
    x: str
    y: str


class UnknownAtomError(KeyError):
    pass


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class _ModelBase:
    w1: tuple[str, ...]
    w2: tuple[str, ...]
    r1: frozenset[Pair]
    val: Mapping[str, frozenset[Pair]] = field(default_factory=dict)
    nom1: Mapping[str, str] = field(default_factory=dict)
    nom2: Mapping[str, str] = field(default_factory=dict)

    def _check_common(self) -> None:
        if not self.w1 or not self.w2:
            raise ModelError("both world sets must be non-empty")
        s1, s2 = set(self.w1), set(self.w2)
        if len(s1) != len(self.w1) or len(s2) != len(self.w2):
            raise ModelError("duplicate world ids")
        for x, x2 in self.r1:
            if x not in s1 or x2 not in s1:
                raise ModelError(f"r1 edge ({x}, {x2}) leaves W1")
        for p, cells in self.val.items():
            for x, y in cells:
                if x not in s1 or y not in s2:
                    raise ModelError(f"valuation of {p} mentions unknown pair ({x}, {y})")
        for n, x in self.nom1.items():
            if x not in s1:
                raise ModelError(f"nominal {n} denotes unknown world {x}")
        for n, y in self.nom2.items():
            if y not in s2:
                raise ModelError(f"nominal {n} denotes unknown world {y}")

    @cached_property
    def _succ1(self) -> dict[str, tuple[str, ...]]:
        return _successors(self.w1, self.r1)

    def succ1(self, x: str) -> tuple[str, ...]:
        return self._succ1[x]

    def pairs(self) -> Iterator[WorldPair]:
        for x in self.w1:
            for y in self.w2:
                yield WorldPair(x, y)


@dataclass(frozen=True)
class KripkeProduct(_ModelBase):
    """Product model: ``r2`` is a single relation over W2."""

    r2: frozenset[Pair] = frozenset()
    kind = "product"

    def __post_init__(self) -> None:
        self._check_common()
        s2 = set(self.w2)
        for y, y2 in self.r2:
            if y not in s2 or y2 not in s2:
                raise ModelError(f"r2 edge ({y}, {y2}) leaves W2")

    def r2_at(self, x: str) -> frozenset[Pair]:
        return self.r2

    @cached_property
    def _succ2(self) -> dict[str, tuple[str, ...]]:
        return _successors(self.w2, self.r2)

    def succ2(self, x: str, y: str) -> tuple[str, ...]:
        return self._succ2[y]


@dataclass(frozen=True)
class KripkeDProduct(_ModelBase):
    """Dependent product model: ``r2`` maps each x in W1 to a relation over W2."""

    r2: Mapping[str, frozenset[Pair]] = field(default_factory=dict)
    kind = "dproduct"

    def __post_init__(self) -> None:
        self._check_common()
        s1, s2 = set(self.w1), set(self.w2)
        for x, rel in self.r2.items():
            if x not in s1:
                raise ModelError(f"r2 indexed by unknown world {x}")
            for y, y2 in rel:
                if y not in s2 or y2 not in s2:
                    raise ModelError(f"r2@{x} edge ({y}, {y2}) leaves W2")

    def r2_at(self, x: str) -> frozenset[Pair]:
        return self.r2.get(x, frozenset())

    @cached_property
    def _succ2(self) -> dict[str, dict[str, tuple[str, ...]]]:
        return {x: _successors(self.w2, self.r2_at(x)) for x in self.w1}

    def succ2(self, x: str, y: str) -> tuple[str, ...]:
        return self._succ2[x][y]


Model = Union[KripkeProduct, KripkeDProduct]


def _successors(worlds: tuple[str, ...], rel: Iterable[Pair]) -> dict[str, tuple[str, ...]]:
    out: dict[str, list[str]] = {w: [] for w in worlds}
    for a, b in sorted(rel):
        out[a].append(b)
    return {w: tuple(v) for w, v in out.items()}


def _nom1(m: Model, n: Nom1, strict: bool) -> str:
    try:
        return m.nom1[n.name]
    except KeyError:
        if strict:
            raise UnknownAtomError(n.name) from None
        return m.w1[0]


def _nom2(m: Model, n: Nom2, strict: bool) -> str:
    try:
        return m.nom2[n.name]
    except KeyError:
        if strict:
            raise UnknownAtomError(n.name) from None
        return m.w2[0]


def evaluate(m: Model, w: tuple[str, str], f: Formula, strict: bool = False) -> bool:
    """``m, w |= f``.

    Derived connectives (|, ->, <->, [k]) are evaluated by their own clauses
    rather than through desugaring, so comparing against ``evaluate(m, w,
    desugar(f))`` is a real check.  Nominals missing from the valuation
    denote the first world of their dimension unless ``strict`` is set.
    """
    x, y = w
    if isinstance(f, Prop):
        cells = m.val.get(f.name)
        if cells is None:
            if strict:
                raise UnknownAtomError(f.name)
            return False
        return (x, y) in cells
    if isinstance(f, Nom1):
        return x == _nom1(m, f, strict)
    if isinstance(f, Nom2):
        return y == _nom2(m, f, strict)
    if isinstance(f, Not):
        return not evaluate(m, w, f.arg, strict)
    if isinstance(f, And):
        return evaluate(m, w, f.left, strict) and evaluate(m, w, f.right, strict)
    if isinstance(f, Or):
        return evaluate(m, w, f.left, strict) or evaluate(m, w, f.right, strict)
    if isinstance(f, Implies):
        return not evaluate(m, w, f.left, strict) or evaluate(m, w, f.right, strict)
    if isinstance(f, Iff):
        return evaluate(m, w, f.left, strict) == evaluate(m, w, f.right, strict)
    if isinstance(f, Dia):
        if f.dim == 1:
            return any(evaluate(m, (x2, y), f.arg, strict) for x2 in m.succ1(x))
        return any(evaluate(m, (x, y2), f.arg, strict) for y2 in m.succ2(x, y))
    if isinstance(f, Box):
        if f.dim == 1:
            return all(evaluate(m, (x2, y), f.arg, strict) for x2 in m.succ1(x))
        return all(evaluate(m, (x, y2), f.arg, strict) for y2 in m.succ2(x, y))
    if isinstance(f, At):
        if isinstance(f.nominal, Nom1):
            return evaluate(m, (_nom1(m, f.nominal, strict), y), f.arg, strict)
        return evaluate(m, (x, _nom2(m, f.nominal, strict)), f.arg, strict)
    raise TypeError(f"not a formula: {f!r}")


def is_valid_on(m: Model, f: Formula, strict: bool = False) -> bool:
    return all(evaluate(m, w, f, strict) for w in m.pairs())


def is_decreasing(m: KripkeDProduct) -> bool:
    """x R1 x' implies R2(x) contains R2(x')."""
    return all(m.r2_at(x) >= m.r2_at(x2) for x, x2 in m.r1)


# --- relational reading of the frame ---------------------------------------

def product_relations(m: Model) -> tuple[set[tuple[Pair, Pair]], set[tuple[Pair, Pair]]]:
    """The horizontal and vertical relations on W1 x W2, materialized as pair sets."""
    rh = {((x, y), (x2, y)) for x, x2 in m.r1 for y in m.w2}
    rv = {((x, y), (x, y2)) for x in m.w1 for y, y2 in m.r2_at(x)}
    return rh, rv


def evaluate_relational(m: Model, w: tuple[str, str], f: Formula) -> bool:
    """Core-formula satisfaction through explicit horizontal/vertical relations.

    Independent of :func:`evaluate`'s coordinate-wise modal clauses; used to
    cross-check them.
    """
    rh, rv = product_relations(m)

    def go(w: tuple[str, str], f: Formula) -> bool:
        if isinstance(f, Not):
            return not go(w, f.arg)
        if isinstance(f, And):
            return go(w, f.left) and go(w, f.right)
        if isinstance(f, Dia):
            rel = rh if f.dim == 1 else rv
            return any(go(v, f.arg) for (u, v) in rel if u == w)
        if isinstance(f, At):
            x, y = w
            if isinstance(f.nominal, Nom1):
                return go((m.nom1.get(f.nominal.name, m.w1[0]), y), f.arg)
            return go((x, m.nom2.get(f.nominal.name, m.w2[0])), f.arg)
        return evaluate(m, w, f)

    return go(tuple(w), f)


# --- exhaustive enumeration ------------------------------------------------

def atom_sort_key(a: Atom) -> tuple[int, int]:
    order = {Prop: 0, Nom1: 1, Nom2: 2}[type(a)]
    return order, int(a.name[1:])


def _subsets(cells: list) -> Iterator[frozenset]:
    """All subsets of ``cells`` in binary-counter order (bit k selects cells[k])."""
    for n in range(1 << len(cells)):
        yield frozenset(c for k, c in enumerate(cells) if n >> k & 1)


def world_names(s1: int, s2: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return tuple(f"x{k}" for k in range(s1)), tuple(f"y{k}" for k in range(s2))


def enumerate_models(
    bounds: tuple[int, int], vocab: Iterable[Atom], kind: str = "product"
) -> Iterator[Model]:
    """Every model with |W1| <= bounds[0], |W2| <= bounds[1] over ``vocab``.

    Order: sizes ascending (W1 first), then R1, R2, proposition valuations,
    first- then second-dimension nominals, each counting up as a binary
    (or world-index) counter.  Brute-force search relies on this order.
    """
    b1, b2 = bounds
    if b1 < 1 or b2 < 1:
        raise ValueError("bounds must be positive")
    if kind not in ("product", "dproduct"):
        raise ValueError(f"unknown model kind {kind!r}")
    vocab = sorted(set(vocab), key=atom_sort_key)
    props = [a.name for a in vocab if isinstance(a, Prop)]
    n1 = [a.name for a in vocab if isinstance(a, Nom1)]
    n2 = [a.name for a in vocab if isinstance(a, Nom2)]
    for s1 in range(1, b1 + 1):
        for s2 in range(1, b2 + 1):
            w1, w2 = world_names(s1, s2)
            grid1 = list(itertools.product(w1, w1))
            grid2 = list(itertools.product(w2, w2))
            cells = list(itertools.product(w1, w2))
            r1s = list(_subsets(grid1))
            r2_single = list(_subsets(grid2))
            if kind == "product":
                r2s: list = r2_single
            else:
                r2s = [dict(zip(w1, combo)) for combo in itertools.product(r2_single, repeat=s1)]
            vals = list(_subsets(cells))
            for r1, r2, pv, nv1, nv2 in itertools.product(
                r1s,
                r2s,
                itertools.product(vals, repeat=len(props)),
                itertools.product(w1, repeat=len(n1)),
                itertools.product(w2, repeat=len(n2)),
            ):
                common = dict(
                    w1=w1, w2=w2, r1=r1,
                    val=dict(zip(props, pv)), nom1=dict(zip(n1, nv1)), nom2=dict(zip(n2, nv2)),
                )
                if kind == "product":
                    yield KripkeProduct(r2=r2, **common)
                else:
                    yield KripkeDProduct(r2=r2, **common)


def find_countermodel_naive(
    f: Formula, bounds: tuple[int, int], kind: str = "product"
) -> tuple[Model, WorldPair] | None:
    """First (model, pair) in enumeration order falsifying ``f``; slow reference search."""
    for m in enumerate_models(bounds, atoms(f), kind):
        for w in m.pairs():
            if not evaluate(m, w, f):
                return m, w
    return None
