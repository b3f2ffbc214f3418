"""Acceptance criteria 1-8, one test each.

Run ``pytest tests/test_acceptance.py`` (or this file directly); the terminal
summary prints one PASS/FAIL line per criterion with the measured values.
"""

import time

import pytest

from hybtab.bruteforce import find_countermodel_bruteforce
from hybtab.checks import tableau_problems, verdict_problems
from hybtab.engine import Budget, Mode, Proved, Refuted, Unknown, prove
from hybtab.fuzz import fuzz
from hybtab.saturation import is_saturated
from hybtab.semantics import (
    KripkeDProduct, enumerate_models, evaluate, evaluate_relational, is_decreasing,
)
from hybtab.syntax import Prop, Vocab, desugar, parse

from conftest import AXDEC, COMMUTE, LOOP, INTRO, RED1, RED2

# limits, straight from the criteria
C1_SECONDS, C1_APPLICATIONS = 1.0, 200
C2_MAX_WORLDS = 3
C3_SECONDS, C3_BUDGET, C3_MAX_WORLDS, C3_BOUNDS = 10.0, 1000, 2, (2, 2)
C4_BUDGET = 500
C5_SECONDS, C5_BUDGET, C5_MIN_FRESH = 5.0, 200, 10
C6_COUNT, C6_MAX_SIZE, C6_BUDGET, C6_BOUNDS, C6_SECONDS = 500, 8, 2000, (2, 2), 300.0
C6_VOCAB = Vocab(props=2, nom1=2, nom2=2)
C8_SECONDS, C8_BOUNDS = 60.0, (2, 2)

# every verdict produced by criteria 1-5, for the invariant sweep of criterion 7
_verdicts: list = []


def _timed(f, *args):
    start = time.perf_counter()
    out = f(*args)
    return out, time.perf_counter() - start


def _keep(v):
    _verdicts.append(v)
    return v


def test_criterion_1_axdec_proved_with_dec(record_property):
    v, secs = _timed(prove, parse(AXDEC), Mode.HDPL_DEC, Budget(C1_APPLICATIONS))
    _keep(v)
    n = v.tableau.applications
    record_property("detail", f"AxDec in hdpl-dec: {v.name}, {n} applications, {secs:.3f}s")
    assert isinstance(v, Proved)
    assert all(b.closed for b in v.tableau.leaves())
    assert n <= C1_APPLICATIONS and secs < C1_SECONDS


def test_criterion_2_axdec_refuted_without_dec(record_property, noncommuting):
    f = parse(AXDEC)
    v = _keep(prove(f, Mode.HDPL))
    assert isinstance(v, Refuted)
    m = v.model
    record_property("detail", f"AxDec in hdpl: {v.name}, |W1|={len(m.w1)}, |W2|={len(m.w2)}, "
                              f"decreasing={is_decreasing(m)}")
    assert isinstance(m, KripkeDProduct)
    assert len(m.w1) <= C2_MAX_WORLDS and len(m.w2) <= C2_MAX_WORLDS
    assert not is_decreasing(m)
    assert not evaluate(m, v.designated, f, strict=True)
    # the oracle frame falsifies AxDec at (x1, y1) once a and b name y1 and y2
    oracle = KripkeDProduct(w1=noncommuting.w1, w2=noncommuting.w2, r1=noncommuting.r1, r2=noncommuting.r2, nom2={"a1": "y1", "a2": "y2"})
    assert not evaluate(oracle, ("x1", "y1"), f, strict=True)


def test_criterion_3_commutativity(record_property):
    f = parse(COMMUTE)
    start = time.perf_counter()
    hpl = _keep(prove(f, Mode.HPL, Budget(C3_BUDGET)))
    hdpl = _keep(prove(f, Mode.HDPL))
    dcm = find_countermodel_bruteforce(f, C3_BOUNDS, "dproduct")
    pcm = find_countermodel_bruteforce(f, C3_BOUNDS, "product")
    secs = time.perf_counter() - start
    size = f"{len(hdpl.model.w1)}x{len(hdpl.model.w2)}" if isinstance(hdpl, Refuted) else "-"
    record_property("detail", f"hpl {hpl.name}, hdpl {hdpl.name} ({size} model), brute force: "
                              f"d-product {'found' if dcm else 'none'}, product {'found' if pcm else 'none'}, "
                              f"{secs:.2f}s")
    assert isinstance(hpl, Proved)
    assert isinstance(hdpl, Refuted)
    assert len(hdpl.model.w1) <= C3_MAX_WORLDS and len(hdpl.model.w2) <= C3_MAX_WORLDS
    assert not evaluate(hdpl.model, hdpl.designated, f, strict=True)
    assert dcm is not None and not evaluate(dcm[0], dcm[1], f)
    assert pcm is None
    assert secs < C3_SECONDS


def test_criterion_4_intro_and_red_axioms(record_property):
    results = {}
    for name, text in [("intro", INTRO), ("Red1", RED1), ("Red2", RED2)]:
        v = _keep(prove(parse(text), Mode.HPL, Budget(C4_BUDGET)))
        results[name] = (v.name, v.tableau.applications)
    record_property("detail", ", ".join(f"{k} {n} in {a}" for k, (n, a) in results.items()))
    assert all(n == "Proved" for n, _ in results.values())


def test_criterion_5_looping_root(record_property):
    f = parse(LOOP)
    start = time.perf_counter()
    hpl = _keep(prove(f, Mode.HPL, Budget(C5_BUDGET)))
    hdpl = _keep(prove(f, Mode.HDPL))
    secs = time.perf_counter() - start
    fresh = sum(hpl.tableau.allocator.allocated.values())
    record_property("detail", f"hpl {hpl.name} with {fresh} fresh nominals, hdpl {hdpl.name} "
                              f"in {hdpl.tableau.applications} applications, {secs:.2f}s")
    assert isinstance(hpl, Unknown) and fresh >= C5_MIN_FRESH
    assert isinstance(hdpl, Refuted)
    assert is_saturated(hdpl.tableau.branches[hdpl.branch], Mode.HDPL) == []
    assert not evaluate(hdpl.model, hdpl.designated, f, strict=True)
    assert secs < C5_SECONDS


@pytest.fixture(scope="module")
def fuzz_reports():
    return {
        mode: fuzz(mode, C6_COUNT, 0, C6_MAX_SIZE, C6_VOCAB, Budget(C6_BUDGET), C6_BOUNDS, check_invariants=True)
        for mode in ("hpl", "hdpl")
    }


def test_criterion_6_differential_fuzz(record_property, fuzz_reports):
    reps = fuzz_reports.values()
    record_property("detail", "; ".join(r.summary() for r in reps))
    for r in reps:
        assert r.count == C6_COUNT
        assert r.soundness_failures == [] and r.refutation_failures == []
    assert sum(r.seconds for r in reps) < C6_SECONDS


def test_criterion_7_invariants(record_property, fuzz_reports):
    problems = []
    for v in _verdicts:
        problems += verdict_problems(v) if not isinstance(v, Unknown) else tableau_problems(v.tableau)
    for r in fuzz_reports.values():
        problems += r.invariant_failures
    # decreasing extraction only shows up on hdpl-dec refutations, which criteria 1-6 do not produce
    dec = fuzz("hdpl-dec", 200, 0, C6_MAX_SIZE, C6_VOCAB, Budget(C6_BUDGET), C6_BOUNDS, check_invariants=True)
    problems += dec.invariant_failures + dec.refutation_failures
    checked = len(_verdicts) + sum(r.count for r in fuzz_reports.values()) + dec.count
    record_property("detail", f"{checked} tableaux checked ({dec.refuted} hdpl-dec refutations), "
                              f"{len(problems)} problems")
    assert len(_verdicts) == 9, "criteria 1-5 must run first"
    assert problems == [], problems[:5]


C8_FORMULAS = [
    "p1 | <1>p1", "~p1 | [2]p1", "p1 -> <2>p1", "<1>p1 -> [1]p1", "[1]p1", "[2]p1",
    "[1]<2>p1", "[2][1]~p1", "<1>[2]p1 -> [2]<1>p1", "(p1 | <2>~p1) -> [1](p1 -> <1>p1)",
    "<1><2>p1", "<2><1>~p1", "<1><1>p1 & <2>~p1",
]


def test_criterion_8_semantics_self_check(record_property):
    formulas = [parse(t) for t in C8_FORMULAS]
    start = time.perf_counter()
    models = disagreements = 0
    for m in enumerate_models(C8_BOUNDS, [Prop("p1")], "product"):
        models += 1
        for f in formulas:
            core = desugar(f)
            for w in m.pairs():
                direct = evaluate(m, w, f)
                if direct != evaluate(m, w, core) or direct != evaluate_relational(m, w, core):
                    disagreements += 1
    secs = time.perf_counter() - start
    record_property("detail", f"{models} product models x {len(formulas)} formulas, "
                              f"{disagreements} disagreements, {secs:.1f}s")
    assert models > 0 and disagreements == 0
    assert secs < C8_SECONDS


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
