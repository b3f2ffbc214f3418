"""Countermodels from open saturated branches.

Worlds are urfathers: the rank-least member of a nominal's identity class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .engine import Branch, BranchFormula, Mode, Tableau, double, single1, single2
from .semantics import KripkeDProduct, KripkeProduct, Model, WorldPair, evaluate
from .syntax import Atom, Dia, Formula, Nom1, Nom2, Not, Prop, subformulas


class ExtractionError(ValueError):
    pass


class NonEquivalenceError(ExtractionError):
    pass


@dataclass(frozen=True)
class NominalClasses:
    """Identity classes of right nominals, per dimension, keyed by member."""

    dim1: dict[Nom1, frozenset[Nom1]]
    dim2: dict[Nom2, frozenset[Nom2]]

    def of(self, s: Atom) -> frozenset:
        table = self.dim1 if isinstance(s, Nom1) else self.dim2
        return table.get(s, frozenset())

    def partition(self, dim: int) -> set[frozenset]:
        return set((self.dim1 if dim == 1 else self.dim2).values())


def right_nominals(b: Branch) -> tuple[set[Nom1], set[Nom2]]:
    r1: set[Nom1] = set()
    r2: set[Nom2] = set()
    for bf in b.formulas:
        if bf.shape == "single1" and isinstance(bf.body, Nom1):
            r1.add(bf.body)
        elif bf.shape == "single2" and isinstance(bf.body, Nom2):
            r2.add(bf.body)
    return r1, r2


def _single(s: Atom, t: Atom) -> BranchFormula:
    return single1(s, t) if isinstance(s, Nom1) else single2(s, t)


def nominal_classes(b: Branch) -> NominalClasses:
    out = []
    for rights in right_nominals(b):
        table = {}
        for s in rights:
            for t in rights:
                st, ts = _single(s, t) in b, _single(t, s) in b
                if st != ts:
                    raise NonEquivalenceError(f"~ is not symmetric on {s}, {t}")
            if _single(s, s) not in b:
                raise NonEquivalenceError(f"~ is not reflexive at {s}")
            table[s] = frozenset(t for t in rights if _single(s, t) in b)
        for s, cls in table.items():
            for t in cls:
                if table[t] != cls:
                    raise NonEquivalenceError(f"~ is not transitive through {s}, {t}")
        out.append(table)
    return NominalClasses(out[0], out[1])


def urfather(b: Branch, classes: NominalClasses, s: Atom) -> Atom:
    cls = Nom1 if isinstance(s, Nom1) else Nom2
    for bf in b.formulas:
        prefix = bf.i if cls is Nom1 else bf.a
        if bf.shape == ("single1" if cls is Nom1 else "single2") and prefix == s and isinstance(bf.body, cls):
            return b.intro.min(classes.of(bf.body))
    return s


class Urfathers:
    """Memoized u(s) for one branch; avoids rescanning the branch per query."""

    def __init__(self, b: Branch, classes: NominalClasses | None = None):
        self.branch = b
        self.classes = classes if classes is not None else nominal_classes(b)
        self._first: dict[Atom, Atom] = {}
        for bf in b.formulas:
            if bf.shape == "single1" and isinstance(bf.body, Nom1):
                self._first.setdefault(bf.i, bf.body)
            elif bf.shape == "single2" and isinstance(bf.body, Nom2):
                self._first.setdefault(bf.a, bf.body)
        self._memo: dict[Atom, Atom] = {}

    def __call__(self, s: Atom) -> Atom:
        hit = self._memo.get(s)
        if hit is None:
            j = self._first.get(s)
            hit = s if j is None else self.branch.intro.min(self.classes.of(j))
            self._memo[s] = hit
        return hit


@dataclass(frozen=True)
class ExtractedModel:
    model: Model
    designated: WorldPair
    urfathers: dict[str, str] = field(default_factory=dict)


def _occurring(b: Branch) -> tuple[list[Nom1], list[Nom2]]:
    ranked = sorted(b.intro.ranks, key=b.intro.rank)
    return [n for n in ranked if isinstance(n, Nom1)], [n for n in ranked if isinstance(n, Nom2)]


def extract_model(t: Tableau, branch_id: int) -> ExtractedModel:
    b = t.branches[branch_id]
    if b.closed or b.children:
        raise ExtractionError(f"branch {branch_id} is not an open leaf")
    u = Urfathers(b)
    occ1, occ2 = _occurring(b)
    w1 = tuple(dict.fromkeys(u(n).name for n in occ1))
    w2 = tuple(dict.fromkeys(u(n).name for n in occ2))
    r1 = set()
    r2 = set()
    r2d: dict[str, set] = {x: set() for x in w1}
    val: dict[str, set] = {}
    # Edges are read only off links whose prefixes are their own urfathers.
    # Boxes and diamonds at any prefix also sit at the urfather prefix, so
    # every edge leaving a world is one the box rules have already seen.
    for bf in b.formulas:
        body = bf.body
        if bf.shape == "single1" and isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
            if u(bf.i) == bf.i:
                r1.add((bf.i.name, u(body.arg).name))
        elif bf.shape == "single2" and isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
            if u(bf.a) == bf.a:
                r2.add((bf.a.name, u(body.arg).name))
        elif bf.is_double:
            if isinstance(body, Prop):
                val.setdefault(body.name, set()).add((u(bf.i).name, u(bf.a).name))
            elif t.mode.dependent and isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
                if u(bf.i) == bf.i and u(bf.a) == bf.a:
                    r2d[bf.i.name].add((bf.a.name, u(body.arg).name))
    # propositions of the input that never reached a double prefix are false everywhere
    for p in _props(t.core):
        val.setdefault(p, set())
    common = dict(
        w1=w1, w2=w2, r1=frozenset(r1),
        val={p: frozenset(c) for p, c in sorted(val.items())},
        nom1={n.name: u(n).name for n in occ1},
        nom2={n.name: u(n).name for n in occ2},
    )
    if t.mode.dependent:
        m: Model = KripkeDProduct(r2={x: frozenset(r) for x, r in r2d.items()}, **common)
    else:
        m = KripkeProduct(r2=frozenset(r2), **common)
    i0, a0 = t.root_nominals
    ur = {n.name: u(n).name for n in occ1 + occ2}
    return ExtractedModel(m, WorldPair(u(i0).name, u(a0).name), ur)


def _props(f: Formula) -> list[str]:
    return sorted({a.name for a in subformulas(f) if isinstance(a, Prop)})


def quasi_subformulas(root_body: Formula) -> frozenset[Formula]:
    subs = subformulas(root_body)
    return frozenset(subs | {Not(s) for s in subs})


@dataclass
class ExtractionReport:
    failures: list[str] = field(default_factory=list)
    informational: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_extraction(t: Tableau, branch_id: int, em: ExtractedModel) -> ExtractionReport:
    """Evaluate every double formula of the branch at its urfather pair.

    In the dependent modes only quasi-subformulas of the root are checked;
    the remaining (accessibility) formulas are evaluated too but their
    failures are reported as informational.
    """
    b = t.branches[branch_id]
    u = Urfathers(b)
    quasi = quasi_subformulas(t.root.body)
    rep = ExtractionReport()
    for k, bf in enumerate(b.formulas):
        if not bf.is_double:
            continue
        pair = (u(bf.i).name, u(bf.a).name)
        holds = evaluate(em.model, pair, bf.body, strict=True)
        scoped = not t.mode.dependent or bf.body in quasi
        if scoped:
            rep.checked += 1
            if not holds:
                rep.failures.append(f"[{k}] {bf} fails at {pair}")
        elif not holds:
            rep.informational.append(f"[{k}] {bf} fails at {pair}")
    return rep
