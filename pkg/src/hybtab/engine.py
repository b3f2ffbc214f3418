"""Internalized tableau calculi for HPL, HdPL and HdPL over decreasing frames.

Branch formulas have one of three shapes: ``@i @a body`` (double),
``@i body`` (single, first dimension) and ``@a body`` (single, second
dimension).  Expansion is round based: at the start of a round every
instance whose premises are all on the branch is collected, then all of
them are applied.  Collection is incremental; an instance is generated in
the round after its last premise was appended, and never again.
"""

from __future__ import annotations

import enum
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .syntax import (
    And, Atom, At, Box, Dia, Formula, Iff, Implies, Nom1, Nom2, NominalAllocator, Not, Or,
    IntroductionOrder, desugar, iter_atoms, nominals, print_formula,
)

log = logging.getLogger(__name__)


class Mode(str, enum.Enum):
    HPL = "hpl"
    HDPL = "hdpl"
    HDPL_DEC = "hdpl-dec"

    @property
    def dependent(self) -> bool:
        return self is not Mode.HPL

    @property
    def model_kind(self) -> str:
        return "dproduct" if self.dependent else "product"

    @property
    def frame_class(self) -> str:
        """The model class the calculus is sound and complete for."""
        return {"hpl": "product", "hdpl": "dproduct", "hdpl-dec": "decreasing"}[self.value]


class EngineError(RuntimeError):
    """Internal inconsistency; indicates a bug, never a property of the input."""


class RejectedInstance(ValueError):
    pass


ROOT = "Root"

# rule ids; the last group are the optional derived rules for |, ->, [k]
RULES = (
    "NegNeg", "And", "NegAnd", "Dia1", "Dia2", "NegDia1", "NegDia2", "At1", "At2",
    "NegAt1", "NegAt2", "Red1", "Red2", "Neg1", "Neg2", "Id1", "Id2", "IdP1", "IdP2",
    "Dia2d", "NegDia2d", "Dec", "IdL1",
    "Or", "NegOr", "Imp", "NegImp", "Box1", "Box2", "Box2d", "NegBox1", "NegBox2", "NegBox2d",
)
FORKING = frozenset({"NegAnd", "Or", "Imp"})
FRESH_DIM = {"Dia1": 1, "NegBox1": 1, "Dia2": 2, "Dia2d": 2, "NegBox2": 2, "NegBox2d": 2}
HPL_ONLY = frozenset({"Dia2", "NegDia2", "Box2", "NegBox2"})
DEPENDENT_ONLY = frozenset({"Dia2d", "NegDia2d", "Dec", "IdL1", "Box2d", "NegBox2d"})
DEC_ONLY = frozenset({"Dec", "IdL1"})


@dataclass(frozen=True, slots=True)
class BranchFormula:
    i: Optional[Nom1]
    a: Optional[Nom2]
    body: Formula
    accessibility: bool = field(default=False, compare=False)
    rule: str = field(default=ROOT, compare=False)
    step: int = field(default=0, compare=False)

    @property
    def key(self) -> tuple:
        return (self.i, self.a, self.body)

    @property
    def shape(self) -> str:
        if self.i is not None and self.a is not None:
            return "double"
        return "single1" if self.i is not None else "single2"

    @property
    def is_double(self) -> bool:
        return self.i is not None and self.a is not None

    def formula(self) -> Formula:
        f = self.body
        if self.a is not None:
            f = At(self.a, f)
        if self.i is not None:
            f = At(self.i, f)
        return f

    def nominals(self) -> list[Atom]:
        out = [n for n in (self.i, self.a) if n is not None]
        return out + [n for n in nominals(self.body) if n not in out]

    def __str__(self) -> str:
        return print_formula(self.formula()) + ("*" if self.accessibility else "")


def double(i: Nom1, a: Nom2, body: Formula, **meta) -> BranchFormula:
    return BranchFormula(i, a, body, **meta)


def single1(i: Nom1, body: Formula, **meta) -> BranchFormula:
    return BranchFormula(i, None, body, **meta)


def single2(a: Nom2, body: Formula, **meta) -> BranchFormula:
    return BranchFormula(None, a, body, **meta)


def is_nom_literal(body: Formula, cls: type) -> bool:
    """body is ``k`` or ``~k`` for a nominal k of class cls."""
    return isinstance(body, cls) or (isinstance(body, Not) and isinstance(body.arg, cls))


@dataclass(frozen=True)
class RuleInstance:
    rule: str
    premises: tuple[int, ...]
    conclusions: tuple[BranchFormula, ...] = ()
    fresh: Optional[int] = None  # dimension of the nominal to allocate
    template: Optional[tuple] = None  # for fresh-nominal rules, see _fresh_conclusions

    @property
    def forks(self) -> bool:
        return self.rule in FORKING


@dataclass
class Budget:
    max_rule_applications: int = 10_000
    max_nominals_per_dim: int = 500

    def __post_init__(self) -> None:
        if self.max_rule_applications < 1 or self.max_nominals_per_dim < 1:
            raise ValueError("budget limits must be positive")


_INDEXES = (
    "doubles_i", "doubles_a", "links1", "links2", "lits1", "lits2", "dia1", "dia1_rev",
    "dia2", "ddia2", "acc_ddia_i", "negdia1", "negdia2_a", "negdia2_ia", "box1", "box2_a",
    "box2_ia",
)


class Branch:
    """An append-only sequence of branch formulas plus lookup indexes."""

    def __init__(self, id: int, parent: Optional[int] = None):
        self.id = id
        self.parent = parent
        self.children: list[int] = []
        self.formulas: list[BranchFormula] = []
        self.index: dict[tuple, int] = {}
        self.applied_diamond: set[int] = set()
        self.intro = IntroductionOrder()
        self.closed_by: Optional[tuple[int, int]] = None
        self.watermark = 0
        self.ix: dict[str, defaultdict] = {name: defaultdict(list) for name in _INDEXES}

    @property
    def closed(self) -> bool:
        return self.closed_by is not None

    def __contains__(self, bf: BranchFormula) -> bool:
        return bf.key in self.index

    def __len__(self) -> int:
        return len(self.formulas)

    def __iter__(self) -> Iterator[BranchFormula]:
        return iter(self.formulas)

    def find(self, bf: BranchFormula) -> Optional[int]:
        return self.index.get(bf.key)

    def fork(self, id: int) -> Branch:
        child = Branch(id, self.id)
        child.formulas = list(self.formulas)
        child.index = dict(self.index)
        child.applied_diamond = set(self.applied_diamond)
        child.intro = self.intro.copy()
        child.watermark = self.watermark
        child.ix = {
            name: defaultdict(list, {k: list(v) for k, v in d.items()}) for name, d in self.ix.items()
        }
        self.children.append(id)
        return child

    def add(self, bf: BranchFormula) -> Optional[int]:
        """Append unless already present; returns the new index or None."""
        if self.closed:
            raise EngineError(f"append to closed branch {self.id}")
        if bf.key in self.index:
            return None
        k = len(self.formulas)
        self.formulas.append(bf)
        self.index[bf.key] = k
        self.intro.note(bf.nominals())
        self._index(k, bf)
        comp = bf.body.arg if isinstance(bf.body, Not) else Not(bf.body)
        other = self.index.get((bf.i, bf.a, comp))
        if other is not None:
            self.closed_by = (other, k)
        return k

    def _index(self, k: int, bf: BranchFormula) -> None:
        ix = self.ix
        i, a, body = bf.i, bf.a, bf.body
        neg = body.arg if isinstance(body, Not) else None
        if bf.is_double:
            ix["doubles_i"][i].append(k)
            ix["doubles_a"][a].append(k)
            if isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
                ix["ddia2"][(i, a)].append((body.arg, k))
                if bf.accessibility:
                    ix["acc_ddia_i"][i].append(k)
            if isinstance(neg, Dia):
                if neg.dim == 1:
                    ix["negdia1"][i].append(k)
                else:
                    ix["negdia2_a"][a].append(k)
                    ix["negdia2_ia"][(i, a)].append(k)
            if isinstance(body, Box):
                if body.dim == 1:
                    ix["box1"][i].append(k)
                else:
                    ix["box2_a"][a].append(k)
                    ix["box2_ia"][(i, a)].append(k)
        elif i is not None:
            if isinstance(body, Nom1):
                ix["links1"][i].append((body, k))
            if is_nom_literal(body, Nom1):
                ix["lits1"][i].append(k)
            if isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
                ix["dia1"][i].append((body.arg, k))
                ix["dia1_rev"][body.arg].append(k)
        else:
            if isinstance(body, Nom2):
                ix["links2"][a].append((body, k))
            if is_nom_literal(body, Nom2):
                ix["lits2"][a].append(k)
            if isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
                ix["dia2"][a].append((body.arg, k))

    def printed(self) -> list[str]:
        return [str(bf) for bf in self.formulas]


# --- instance generation ---------------------------------------------------

def _inst(rule: str, premises: tuple[int, ...], *conclusions: BranchFormula) -> RuleInstance:
    return RuleInstance(rule, premises, tuple(conclusions))


def _fresh_inst(rule: str, k: int, template: tuple) -> RuleInstance:
    return RuleInstance(rule, (k,), fresh=FRESH_DIM[rule], template=template)


def _as_main(b: Branch, k: int, mode: Mode) -> Iterator[RuleInstance]:
    """Instances in which formula k is the principal (first) premise."""
    bf = b.formulas[k]
    i, a, body = bf.i, bf.a, bf.body
    ix = b.ix
    dep = mode.dependent
    if bf.is_double:
        neg = body.arg if isinstance(body, Not) else None
        if isinstance(neg, Not):
            yield _inst("NegNeg", (k,), double(i, a, neg.arg))
        elif isinstance(body, And):
            yield _inst("And", (k,), double(i, a, body.left), double(i, a, body.right))
        elif isinstance(neg, And):
            yield _inst("NegAnd", (k,), double(i, a, Not(neg.left)), double(i, a, Not(neg.right)))
        elif isinstance(body, Dia):
            if body.dim == 1:
                yield _fresh_inst("Dia1", k, (i, a, body.arg))
            elif not dep:
                yield _fresh_inst("Dia2", k, (i, a, body.arg))
            elif not bf.accessibility:
                yield _fresh_inst("Dia2d", k, (i, a, body.arg))
        elif isinstance(neg, Dia):
            if neg.dim == 1:
                for j, l in ix["dia1"].get(i, ()):
                    yield _inst("NegDia1", (k, l), double(j, a, Not(neg.arg)))
            elif not dep:
                for c, l in ix["dia2"].get(a, ()):
                    yield _inst("NegDia2", (k, l), double(i, c, Not(neg.arg)))
            else:
                for c, l in ix["ddia2"].get((i, a), ()):
                    yield _inst("NegDia2d", (k, l), double(i, c, Not(neg.arg)))
        elif isinstance(body, At):
            n = body.nominal
            if isinstance(n, Nom1):
                yield _inst("At1", (k,), double(n, a, body.arg))
            else:
                yield _inst("At2", (k,), double(i, n, body.arg))
        elif isinstance(neg, At):
            n = neg.nominal
            if isinstance(n, Nom1):
                yield _inst("NegAt1", (k,), double(n, a, Not(neg.arg)))
            else:
                yield _inst("NegAt2", (k,), double(i, n, Not(neg.arg)))
        elif isinstance(body, Or):
            yield _inst("Or", (k,), double(i, a, body.left), double(i, a, body.right))
        elif isinstance(neg, Or):
            yield _inst("NegOr", (k,), double(i, a, Not(neg.left)), double(i, a, Not(neg.right)))
        elif isinstance(body, Implies):
            yield _inst("Imp", (k,), double(i, a, Not(body.left)), double(i, a, body.right))
        elif isinstance(neg, Implies):
            yield _inst("NegImp", (k,), double(i, a, neg.left), double(i, a, Not(neg.right)))
        elif isinstance(body, Box):
            if body.dim == 1:
                for j, l in ix["dia1"].get(i, ()):
                    yield _inst("Box1", (k, l), double(j, a, body.arg))
            elif not dep:
                for c, l in ix["dia2"].get(a, ()):
                    yield _inst("Box2", (k, l), double(i, c, body.arg))
            else:
                for c, l in ix["ddia2"].get((i, a), ()):
                    yield _inst("Box2d", (k, l), double(i, c, body.arg))
        elif isinstance(neg, Box):
            if neg.dim == 1:
                yield _fresh_inst("NegBox1", k, (i, a, Not(neg.arg)))
            elif not dep:
                yield _fresh_inst("NegBox2", k, (i, a, Not(neg.arg)))
            else:
                yield _fresh_inst("NegBox2d", k, (i, a, Not(neg.arg)))
        if is_nom_literal(body, Nom1):
            yield _inst("Red1", (k,), single1(i, body))
        elif is_nom_literal(body, Nom2):
            yield _inst("Red2", (k,), single2(a, body))
        if not (dep and bf.accessibility):
            for j, l in ix["links1"].get(i, ()):
                yield _inst("Id1", (k, l), double(j, a, body))
            for c, l in ix["links2"].get(a, ()):
                yield _inst("Id2", (k, l), double(i, c, body))
        if mode is Mode.HDPL_DEC and bf.accessibility:
            # body is <2>c; formula k is the (j, a) premise of Dec
            for l in ix["dia1_rev"].get(i, ()):
                src = b.formulas[l].i
                yield _inst("Dec", (l, k), double(src, a, body, accessibility=True))
    elif i is not None:
        if isinstance(body, Not) and isinstance(body.arg, Nom1):
            j = body.arg
            yield _inst("Neg1", (k,), single1(j, j))
        if mode is Mode.HDPL_DEC and isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
            for c, l in ix["links1"].get(body.arg, ()):
                yield _inst("IdL1", (k, l), single1(i, Dia(1, c)))
        if is_nom_literal(body, Nom1):
            for j, l in ix["links1"].get(i, ()):
                yield _inst("IdP1", (k, l), single1(j, body))
    else:
        if isinstance(body, Not) and isinstance(body.arg, Nom2):
            c = body.arg
            yield _inst("Neg2", (k,), single2(c, c))
        if is_nom_literal(body, Nom2):
            for c, l in ix["links2"].get(a, ()):
                yield _inst("IdP2", (k, l), single2(c, body))


def _as_partner(b: Branch, k: int, mode: Mode) -> Iterator[RuleInstance]:
    """Instances in which formula k is a side premise; the principal premise is found via indexes."""
    bf = b.formulas[k]
    i, a, body = bf.i, bf.a, bf.body
    ix = b.ix
    dep = mode.dependent
    if bf.is_double:
        if dep and isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
            c = body.arg
            for m in ix["negdia2_ia"].get((i, a), ()):
                yield _inst("NegDia2d", (m, k), double(i, c, Not(b.formulas[m].body.arg.arg)))
            for m in ix["box2_ia"].get((i, a), ()):
                yield _inst("Box2d", (m, k), double(i, c, b.formulas[m].body.arg))
        return
    if i is not None:
        if isinstance(body, Dia) and body.dim == 1 and isinstance(body.arg, Nom1):
            j = body.arg
            for m in ix["negdia1"].get(i, ()):
                mf = b.formulas[m]
                yield _inst("NegDia1", (m, k), double(j, mf.a, Not(mf.body.arg.arg)))
            for m in ix["box1"].get(i, ()):
                mf = b.formulas[m]
                yield _inst("Box1", (m, k), double(j, mf.a, mf.body.arg))
            if mode is Mode.HDPL_DEC:
                for m in ix["acc_ddia_i"].get(j, ()):
                    mf = b.formulas[m]
                    yield _inst("Dec", (k, m), double(i, mf.a, mf.body, accessibility=True))
        if isinstance(body, Nom1):
            j = body
            for m in ix["doubles_i"].get(i, ()):
                mf = b.formulas[m]
                if not (dep and mf.accessibility):
                    yield _inst("Id1", (m, k), double(j, mf.a, mf.body))
            for m in ix["lits1"].get(i, ()):
                yield _inst("IdP1", (m, k), single1(j, b.formulas[m].body))
            if mode is Mode.HDPL_DEC:
                for m in ix["dia1_rev"].get(i, ()):
                    yield _inst("IdL1", (m, k), single1(b.formulas[m].i, Dia(1, j)))
    else:
        if not dep and isinstance(body, Dia) and body.dim == 2 and isinstance(body.arg, Nom2):
            c = body.arg
            for m in ix["negdia2_a"].get(a, ()):
                mf = b.formulas[m]
                yield _inst("NegDia2", (m, k), double(mf.i, c, Not(mf.body.arg.arg)))
            for m in ix["box2_a"].get(a, ()):
                mf = b.formulas[m]
                yield _inst("Box2", (m, k), double(mf.i, c, mf.body.arg))
        if isinstance(body, Nom2):
            c = body
            for m in ix["doubles_a"].get(a, ()):
                mf = b.formulas[m]
                if not (dep and mf.accessibility):
                    yield _inst("Id2", (m, k), double(mf.i, c, mf.body))
            for m in ix["lits2"].get(a, ()):
                yield _inst("IdP2", (m, k), single2(c, b.formulas[m].body))


def is_applicable(b: Branch, inst: RuleInstance) -> bool:
    if b.closed:
        return False
    if inst.fresh is not None:
        return inst.premises[0] not in b.applied_diamond
    if inst.forks:
        return not any(c in b for c in inst.conclusions)
    return not all(c in b for c in inst.conclusions)


def _collect(b: Branch, mode: Mode, start: int, end: int) -> list[RuleInstance]:
    seen: set[tuple] = set()
    out: list[RuleInstance] = []
    for k in range(start, end):
        for gen in (_as_main, _as_partner):
            for inst in gen(b, k, mode):
                key = (inst.rule, inst.premises)
                if key in seen:
                    continue
                seen.add(key)
                if is_applicable(b, inst):
                    out.append(inst)
    return out


def applicable_instances(b: Branch, mode: Mode) -> list[RuleInstance]:
    """Every rule instance on b whose conclusions are not already all present."""
    insts = _collect(b, mode, 0, len(b))
    insts.sort(key=lambda r: (max(r.premises), r.premises, r.rule))
    return insts


# --- tableau ---------------------------------------------------------------

@dataclass
class Outcome:
    kind: str  # "closed" | "open" | "budget"
    branch: Optional[int] = None
    report: Optional[dict] = None


class Tableau:
    def __init__(self, phi: Formula, mode: Mode | str = Mode.HPL, derived_rules: bool = False):
        self.mode = Mode(mode)
        self.phi = phi
        self.derived_rules = derived_rules
        self.core = desugar_iff(phi) if derived_rules else desugar(phi)
        self.allocator = NominalAllocator(n.name for n in iter_atoms(phi) if not _is_prop(n))
        i0 = self.allocator.fresh(1)
        a0 = self.allocator.fresh(2)
        self.allocator.allocated = {1: 0, 2: 0}  # count only nominals introduced by rules
        self.root = double(i0, a0, Not(self.core))
        self.branches: dict[int, Branch] = {}
        self.trace: list[dict] = []
        self.applications = 0
        self.rounds = 0
        self._next_id = 0
        b = self._new_branch(None)
        b.add(self.root)

    @property
    def root_nominals(self) -> tuple[Nom1, Nom2]:
        return self.root.i, self.root.a

    def _new_branch(self, parent: Optional[Branch]) -> Branch:
        bid = self._next_id
        self._next_id += 1
        b = Branch(bid) if parent is None else parent.fork(bid)
        self.branches[bid] = b
        return b

    def leaves(self) -> list[Branch]:
        return [b for b in self.branches.values() if not b.children]

    def open_leaves(self) -> list[Branch]:
        return [b for b in self.leaves() if not b.closed]

    @property
    def closed(self) -> bool:
        return all(b.closed for b in self.leaves())

    def nominals_allocated(self) -> dict[int, int]:
        return dict(self.allocator.allocated)

    def apply_rule(self, branch_id: int, inst: RuleInstance) -> list[int]:
        b = self.branches[branch_id]
        if b.children or not is_applicable(b, inst):
            raise RejectedInstance(f"{inst.rule}{inst.premises} is not applicable on branch {branch_id}")
        if inst.rule in HPL_ONLY and self.mode.dependent or inst.rule in DEPENDENT_ONLY and not self.mode.dependent:
            raise RejectedInstance(f"{inst.rule} is not a rule of {self.mode.value}")
        if inst.rule in DEC_ONLY and self.mode is not Mode.HDPL_DEC:
            raise RejectedInstance(f"{inst.rule} requires hdpl-dec")
        self.applications += 1
        step = self.applications
        record = {
            "step": step, "branch": branch_id, "rule": inst.rule,
            "premises": list(inst.premises), "added": [], "accessibility": False, "fresh": None,
        }
        self.trace.append(record)

        def stamp(bf: BranchFormula) -> BranchFormula:
            return BranchFormula(bf.i, bf.a, bf.body, bf.accessibility, inst.rule, step)

        if inst.forks:
            kids = [self._new_branch(b), self._new_branch(b)]
            for kid, concl in zip(kids, inst.conclusions):
                if kid.add(stamp(concl)) is not None:
                    record["added"].append(print_formula(concl.formula()))
            record["children"] = [kid.id for kid in kids]
            return [kid.id for kid in kids]

        conclusions = inst.conclusions
        if inst.fresh is not None:
            fresh = self.allocator.fresh(inst.fresh)
            record["fresh"] = fresh.name
            conclusions = _fresh_conclusions(inst, fresh)
            b.applied_diamond.add(inst.premises[0])
        for concl in conclusions:
            if b.closed:
                break
            if b.add(stamp(concl)) is not None:
                record["added"].append(print_formula(concl.formula()))
                record["accessibility"] |= concl.accessibility
        return [branch_id]

    def expand(self, budget: Budget = Budget()) -> Outcome:
        """Run fair rounds until every branch closes, one saturates, or the budget runs out."""
        while True:
            open_ = self.open_leaves()
            if not open_:
                return Outcome("closed")
            pending = []
            for b in open_:
                end = len(b)
                insts = _collect(b, self.mode, b.watermark, end)
                b.watermark = end
                pending.append((b, insts))
            for b, insts in pending:
                if not insts:
                    from .saturation import is_saturated

                    violations = is_saturated(b, self.mode)
                    if violations:
                        raise EngineError(
                            f"branch {b.id} has no applicable rule but is unsaturated: {violations[:3]}"
                        )
                    return Outcome("open", branch=b.id)
            self.rounds += 1
            stack = list(reversed(pending))
            while stack:
                b, insts = stack.pop()
                for n, inst in enumerate(insts):
                    if not is_applicable(b, inst):
                        continue
                    if self.applications >= budget.max_rule_applications:
                        return self._exhausted("rule applications")
                    if inst.fresh is not None and self.allocator.allocated[inst.fresh] >= budget.max_nominals_per_dim:
                        return self._exhausted(f"nominals in dimension {inst.fresh}")
                    kids = self.apply_rule(b.id, inst)
                    if len(kids) == 2:
                        rest = insts[n + 1:]
                        stack.append((self.branches[kids[1]], rest))
                        stack.append((self.branches[kids[0]], rest))
                        break

    def _exhausted(self, what: str) -> Outcome:
        report = {
            "exhausted": what,
            "rule_applications": self.applications,
            "rounds": self.rounds,
            "nominals_allocated": {"1": self.allocator.allocated[1], "2": self.allocator.allocated[2]},
            "open_branches": [b.id for b in self.open_leaves()],
        }
        return Outcome("budget", report=report)


def _is_prop(a: Atom) -> bool:
    return not isinstance(a, (Nom1, Nom2))


def _fresh_conclusions(inst: RuleInstance, n: Atom) -> tuple[BranchFormula, ...]:
    i, a, body = inst.template
    if inst.rule in ("Dia1", "NegBox1"):
        return single1(i, Dia(1, n)), double(n, a, body)
    if inst.rule in ("Dia2", "NegBox2"):
        return single2(a, Dia(2, n)), double(i, n, body)
    # Dia2d / NegBox2d: the link stays doubly prefixed and is an accessibility formula
    return double(i, a, Dia(2, n), accessibility=True), double(i, n, body)


def desugar_iff(f: Formula) -> Formula:
    """Rewrite only <-> (as two implications); keeps |, -> and [k] for the derived rules."""
    if isinstance(f, Iff):
        l, r = desugar_iff(f.left), desugar_iff(f.right)
        return And(Implies(l, r), Implies(r, l))
    if isinstance(f, Not):
        return Not(desugar_iff(f.arg))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(desugar_iff(f.left), desugar_iff(f.right))
    if isinstance(f, (Dia, Box)):
        return type(f)(f.dim, desugar_iff(f.arg))
    if isinstance(f, At):
        return At(f.nominal, desugar_iff(f.arg))
    return f


def init_tableau(phi: Formula, mode: Mode | str = Mode.HPL, derived_rules: bool = False) -> Tableau:
    return Tableau(phi, mode, derived_rules)


def expand(t: Tableau, budget: Budget = Budget()) -> Outcome:
    return t.expand(budget)


# --- verdicts --------------------------------------------------------------

@dataclass
class Proved:
    tableau: Tableau

    @property
    def trace(self) -> list[dict]:
        return self.tableau.trace

    name = "Proved"


@dataclass
class Refuted:
    tableau: Tableau
    branch: int
    extracted: "ExtractedModel"  # noqa: F821

    @property
    def model(self):
        return self.extracted.model

    @property
    def designated(self):
        return self.extracted.designated

    name = "Refuted"


@dataclass
class Unknown:
    tableau: Tableau
    report: dict

    name = "Unknown"


Verdict = Union[Proved, Refuted, Unknown]


def prove(
    phi: Formula, mode: Mode | str = Mode.HPL, budget: Budget = Budget(), derived_rules: bool = False
) -> Verdict:
    from .extract import extract_model, verify_extraction
    from .semantics import evaluate

    t = Tableau(phi, mode, derived_rules)
    out = t.expand(budget)
    if out.kind == "closed":
        return Proved(t)
    if out.kind == "budget":
        return Unknown(t, out.report)
    em = extract_model(t, out.branch)
    if evaluate(em.model, em.designated, phi, strict=True):
        raise EngineError(f"extracted model does not falsify the input on branch {out.branch}")
    rep = verify_extraction(t, out.branch, em)
    if not rep.ok:
        raise EngineError("model existence fails: " + "; ".join(rep.failures[:3]))
    return Refuted(t, out.branch, em)


def sequent_formula(gamma: Iterable[Formula], delta: Iterable[Formula]) -> Formula:
    """The single formula (conjunction of gamma) -> (disjunction of delta)."""
    gamma, delta = list(gamma), list(delta)
    used = {a.name for f in gamma + delta for a in iter_atoms(f)}
    k = 0
    while f"p{k}" in used:
        k += 1
    from .syntax import Prop

    top = Or(Prop(f"p{k}"), Not(Prop(f"p{k}")))
    lhs = gamma[0] if gamma else top
    for g in gamma[1:]:
        lhs = And(lhs, g)
    rhs = delta[0] if delta else Not(top)
    for d in delta[1:]:
        rhs = Or(rhs, d)
    return Implies(lhs, rhs)


def prove_sequent(
    gamma: Iterable[Formula], delta: Iterable[Formula], mode: Mode | str = Mode.HPL,
    budget: Budget = Budget(), derived_rules: bool = False,
) -> Verdict:
    return prove(sequent_formula(gamma, delta), mode, budget, derived_rules)


def is_closed(b: Branch) -> Optional[tuple[int, int]]:
    return b.closed_by
