import pytest

from hybtab.engine import (
    Branch, Budget, EngineError, Mode, Proved, Refuted, RejectedInstance, Tableau, Unknown,
    applicable_instances, double, is_closed, prove, prove_sequent, single1, single2,
)
from hybtab.semantics import evaluate, is_decreasing
from hybtab.syntax import And, At, Dia, Nom1, Nom2, Not, Prop, parse

from conftest import AXDEC, COMMUTE, LOOP, INTRO, RED1, RED2

i0, i1 = Nom1("i0"), Nom1("i1")
a, b_, a1 = Nom2("a1"), Nom2("a2"), Nom2("a3")
p = Prop("p1")


def branch(*bfs) -> Branch:
    b = Branch(0)
    for bf in bfs:
        b.add(bf)
    return b


# --- roots -----------------------------------------------------------------

def test_axdec_root_matches_first_line_after_double_negation():
    t = Tableau(parse(AXDEC), Mode.HDPL_DEC)
    assert str(t.root) == "@i0 @a0 ~~(<1>@a1 <2>a2 & ~@a1 <2>a2)"
    t.expand(Budget(1))
    assert t.trace[0]["added"] == ["@i0 @a0 (<1>@a1 <2>a2 & ~@a1 <2>a2)"]


def test_root_uses_fresh_names():
    assert str(Tableau(p).root) == "@i0 @a0 ~p1"
    t = Tableau(parse("@i0 p1 & a0"))
    assert (t.root.i, t.root.a) == (Nom1("i1"), Nom2("a1"))
    assert t.allocator.allocated == {1: 0, 2: 0}


# --- instances -------------------------------------------------------------

def test_dia1_instance_needs_fresh_nominal():
    insts = applicable_instances(branch(double(i0, Nom2("a0"), Dia(1, At(a, Dia(2, b_))))), Mode.HDPL_DEC)
    assert [(x.rule, x.fresh) for x in insts] == [("Dia1", 1)]


def test_dec_instance():
    b = branch(single1(i0, Dia(1, i1)), double(i1, a, Dia(2, a1), accessibility=True))
    decs = [x for x in applicable_instances(b, Mode.HDPL_DEC) if x.rule == "Dec"]
    assert len(decs) == 1
    (concl,) = decs[0].conclusions
    assert concl == double(i0, a, Dia(2, a1)) and concl.accessibility
    assert not [x for x in applicable_instances(b, Mode.HDPL) if x.rule == "Dec"]


def test_negated_proposition_has_no_instances():
    assert applicable_instances(branch(double(i0, Nom2("a0"), Not(p))), Mode.HPL) == []


def _tableau_with(mode, *bfs) -> Tableau:
    t = Tableau(Prop("p9"), mode)
    b = t.branches[0]
    for bf in bfs:
        b.add(bf)
        t.allocator.reserve(bf.nominals())
    return t


def _apply(t, rule, premises=None):
    b = t.branches[0]
    (inst,) = [x for x in applicable_instances(b, t.mode) if x.rule == rule and (premises is None or x.premises == premises)]
    t.apply_rule(0, inst)
    return t.trace[-1]


def test_dia2d_adds_accessibility_link():
    t = _tableau_with(Mode.HDPL, double(i1, a, Dia(2, b_)))
    rec = _apply(t, "Dia2d")
    assert rec["accessibility"] and rec["fresh"] == "a3"
    assert rec["added"] == ["@i1 @a1 <2>a3", "@i1 @a3 a2"]
    assert t.branches[0].formulas[-2].accessibility


def test_negdia2d_and_red2():
    t = _tableau_with(Mode.HDPL_DEC, double(i0, a, Not(Dia(2, b_))), double(i0, a, Dia(2, a1), accessibility=True))
    assert _apply(t, "NegDia2d")["added"] == ["@i0 @a3 ~a2"]
    t2 = _tableau_with(Mode.HPL, double(i1, a1, b_))
    assert _apply(t2, "Red2")["added"] == ["@a3 a2"]


def test_rules_outside_their_calculus_are_rejected():
    t = _tableau_with(Mode.HDPL, single1(i0, Dia(1, i1)), double(i1, a, Dia(2, a1), accessibility=True))
    b = t.branches[0]
    dec = [x for x in applicable_instances(b, Mode.HDPL_DEC) if x.rule == "Dec"][0]
    with pytest.raises(RejectedInstance):
        t.apply_rule(0, dec)
    hpl = _tableau_with(Mode.HPL, double(i1, a, Dia(2, b_)))
    dia2d = [x for x in applicable_instances(hpl.branches[0], Mode.HDPL) if x.rule == "Dia2d"][0]
    with pytest.raises(RejectedInstance):
        hpl.apply_rule(0, dia2d)


# --- closure ---------------------------------------------------------------

def test_closure():
    assert is_closed(branch(single2(a1, b_), single2(a1, Not(b_)))) == (0, 1)
    assert is_closed(Branch(0)) is None
    assert is_closed(branch(double(i1, a, p), double(i1, b_, Not(p)))) is None


def test_closed_branch_rejects_growth():
    b = branch(single2(a1, b_), single2(a1, Not(b_)))
    with pytest.raises(EngineError):
        b.add(double(i0, a, p))


# --- expansion -------------------------------------------------------------

def test_axdec_closes_with_dec():
    t = Tableau(parse(AXDEC), "hdpl-dec")
    assert t.expand(Budget(200)).kind == "closed"
    assert "Dec" in {r["rule"] for r in t.trace}


def test_negated_prop_saturates_immediately():
    t = Tableau(p)
    out = t.expand()
    assert out.kind == "open" and t.applications == 0


def test_looping_root_in_hpl():
    t = Tableau(parse(LOOP), "hpl")
    out = t.expand(Budget(200))
    assert out.kind == "budget"
    assert sum(t.allocator.allocated.values()) >= 10


def test_nominal_budget():
    out = Tableau(parse(LOOP), "hpl").expand(Budget(10_000, 5))
    assert out.kind == "budget" and out.report["exhausted"] == "nominals in dimension 1"


# --- verdicts --------------------------------------------------------------

def test_axdec_verdicts():
    assert isinstance(prove(parse(AXDEC), "hdpl-dec"), Proved)
    v = prove(parse(AXDEC), "hdpl")
    assert isinstance(v, Refuted)
    assert not evaluate(v.model, v.designated, parse(AXDEC)) and not is_decreasing(v.model)


def test_commutativity_verdicts():
    assert isinstance(prove(parse(COMMUTE), "hpl", Budget(1000)), Proved)
    assert isinstance(prove(parse(COMMUTE), "hdpl"), Refuted)


@pytest.mark.parametrize("text", [INTRO, RED1, RED2])
def test_hpl_theorems(text):
    assert isinstance(prove(parse(text), "hpl", Budget(500)), Proved)


def test_sequents():
    assert isinstance(prove_sequent([p], [p]), Proved)
    assert isinstance(prove_sequent([], [p]), Refuted)
    gamma = [parse("@i1 @a1 p1"), parse("<1>i1"), parse("<2>a1")]
    assert isinstance(prove_sequent(gamma, [parse("<1><2>p1")]), Proved)


@pytest.mark.parametrize("derived", [False, True])
def test_derived_rules_agree(derived):
    for text, mode, verdict in [(AXDEC, "hdpl-dec", "Proved"), (COMMUTE, "hdpl", "Refuted"),
                                (INTRO, "hpl", "Proved"), ("[1]p1 -> p1", "hpl", "Refuted")]:
        assert prove(parse(text), mode, Budget(1000), derived).name == verdict


def test_deterministic():
    runs = [prove(parse(COMMUTE), "hdpl").tableau.trace for _ in range(2)]
    assert runs[0] == runs[1]


def test_unknown_reports_budget():
    v = prove(parse(LOOP), "hpl", Budget(50))
    assert isinstance(v, Unknown) and v.report["rule_applications"] == 50


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(0)
