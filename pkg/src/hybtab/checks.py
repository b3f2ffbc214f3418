"""Structural invariants of finished tableaux, returned as lists of problems.

An empty list means the invariant holds.  Used by the test suite and the
fuzz harness; none of this is needed to run the prover.
"""

from __future__ import annotations

from .engine import FRESH_DIM, Branch, Mode, Refuted, Tableau, Verdict, single1, single2
from .extract import (
    ExtractionError, Urfathers, extract_model, nominal_classes, quasi_subformulas,
    right_nominals, verify_extraction,
)
from .saturation import is_saturated
from .semantics import is_decreasing
from .syntax import Dia, Nom1, Nom2, nominals


def shape_problems(t: Tableau) -> list[str]:
    out = []
    for b in t.leaves():
        for k, bf in enumerate(b.formulas):
            if bf.i is None and bf.a is None:
                out.append(f"branch {b.id} [{k}] has no prefix")
            if bf.accessibility and not (bf.is_double and isinstance(bf.body, Dia) and bf.body.dim == 2 and isinstance(bf.body.arg, Nom2)):
                out.append(f"branch {b.id} [{k}] {bf} is flagged but not a <2>-link")
            if bf.accessibility and bf.rule not in ("Dia2d", "NegBox2d", "Dec"):
                out.append(f"branch {b.id} [{k}] flagged by {bf.rule}")
    return out


def quasi_subformula_problems(t: Tableau) -> list[str]:
    quasi = quasi_subformulas(t.root.body)
    out = []
    for b in t.leaves():
        for k, bf in enumerate(b.formulas):
            if bf.is_double and bf.body not in quasi:
                if t.mode.dependent and bf.accessibility:
                    continue
                out.append(f"branch {b.id} [{k}] {bf} is not a quasi-subformula of the root")
    return out


def right_nominal_problems(t: Tableau) -> list[str]:
    in_root = set(nominals(t.root.formula()))
    out = []
    for b in t.leaves():
        r1, r2 = right_nominals(b)
        for s in sorted(r1 | r2, key=str):
            if s not in in_root:
                out.append(f"branch {b.id}: right nominal {s} does not occur in the root")
    return out


def closure_problems(t: Tableau) -> list[str]:
    out = []
    for b in t.leaves():
        if b.closed:
            last = max(b.closed_by)
            if last != len(b.formulas) - 1:
                out.append(f"branch {b.id} grew after closing at [{last}]")
            x, y = (b.formulas[k] for k in b.closed_by)
            if (x.i, x.a) != (y.i, y.a):
                out.append(f"branch {b.id} closed on different prefixes")
        if len(set(bf.key for bf in b.formulas)) != len(b.formulas):
            out.append(f"branch {b.id} has duplicate formulas")
    return out


def diamond_problems(t: Tableau) -> list[str]:
    """Each consumed diamond introduced exactly one fresh nominal, once."""
    out = []
    fresh_seen: set[str] = set()
    for rec in t.trace:
        if rec["rule"] in FRESH_DIM:
            if rec["fresh"] is None or rec["fresh"] in fresh_seen:
                out.append(f"step {rec['step']}: bad fresh nominal {rec['fresh']}")
            fresh_seen.add(rec["fresh"])
    for b in t.leaves():
        uses: dict[tuple[int, int], int] = {}
        for rec in t.trace:
            if rec["rule"] in FRESH_DIM and rec["premises"][0] in b.applied_diamond:
                uses[(rec["branch"], rec["premises"][0])] = uses.get((rec["branch"], rec["premises"][0]), 0) + 1
        for k in b.applied_diamond:
            bf = b.formulas[k]
            if not bf.is_double:
                out.append(f"branch {b.id}: consumed [{k}] is not doubly prefixed")
    return out


def equivalence_problems(b: Branch) -> list[str]:
    try:
        nominal_classes(b)
    except ExtractionError as e:
        return [f"branch {b.id}: {e}"]
    return []


def urfather_problems(t: Tableau, b: Branch) -> list[str]:
    """Urfather properties i-iii and idempotence."""
    out = []
    u = Urfathers(b)
    r1, r2 = right_nominals(b)
    single = {Nom1: single1, Nom2: single2}
    for s in r1 | r2:
        if single[type(s)](u(s), s) not in b:
            out.append(f"(i) @{u(s)} {s} missing")
    for bf in b.formulas:
        if bf.shape == "single1" and isinstance(bf.body, Nom1) and u(bf.i) != u(bf.body):
            out.append(f"(ii) u({bf.i}) != u({bf.body})")
        if bf.shape == "single2" and isinstance(bf.body, Nom2) and u(bf.a) != u(bf.body):
            out.append(f"(ii) u({bf.a}) != u({bf.body})")
    quasi = quasi_subformulas(t.root.body)
    for bf in b.formulas:
        if not bf.is_double or bf.body not in quasi:
            continue
        if t.mode.dependent and bf.accessibility:
            continue
        moved = bf.__class__(u(bf.i), u(bf.a), bf.body)
        if moved not in b:
            out.append(f"(iii) {moved} missing for {bf}")
    for n in b.intro.ranks:
        if u(u(n)) != u(n):
            out.append(f"u is not idempotent at {n}")
    return out


def tableau_problems(t: Tableau) -> list[str]:
    return (
        shape_problems(t) + quasi_subformula_problems(t) + right_nominal_problems(t)
        + closure_problems(t) + diamond_problems(t)
    )


def verdict_problems(v: Verdict) -> list[str]:
    """Everything checkable about a verdict, including its countermodel if any."""
    t = v.tableau
    out = tableau_problems(t)
    if isinstance(v, Refuted):
        b = t.branches[v.branch]
        out += [str(x) for x in is_saturated(b, t.mode)]
        out += equivalence_problems(b)
        if not out:
            out += urfather_problems(t, b)
            em = extract_model(t, v.branch)
            out += verify_extraction(t, v.branch, em).failures
            if t.mode is Mode.HDPL_DEC and not is_decreasing(em.model):
                out.append("extracted model is not decreasing")
    return out
