import dataclasses

import pytest

from hybtab.checks import tableau_problems, urfather_problems, verdict_problems
from hybtab.engine import Branch, Budget, Mode, Refuted, double, prove, single1, single2
from hybtab.extract import (
    ExtractedModel, NonEquivalenceError, Urfathers, extract_model, nominal_classes, right_nominals,
    urfather, verify_extraction,
)
from hybtab.saturation import is_saturated
from hybtab.semantics import evaluate, is_decreasing
from hybtab.syntax import And, Dia, Nom1, Nom2, Not, Prop, parse

from conftest import AXDEC, COMMUTE

i0, i1, i2 = Nom1("i0"), Nom1("i1"), Nom1("i2")
a0, a1, a2 = Nom2("a0"), Nom2("a1"), Nom2("a2")
p, q = Prop("p1"), Prop("p2")


def branch(*bfs) -> Branch:
    b = Branch(0)
    for bf in bfs:
        b.add(bf)
    return b


# --- saturation ------------------------------------------------------------

def test_saturation_examples():
    assert is_saturated(branch(double(i0, a0, Not(p))), Mode.HPL) == []
    (v,) = is_saturated(branch(double(i0, a0, And(p, q))), Mode.HPL)
    assert v.condition == "ii"
    conds = {v.condition for v in is_saturated(branch(single1(i0, Not(i1))), Mode.HPL)}
    assert conds == {"xiv"}


def test_dec_condition_only_in_dec_mode():
    b = branch(single1(i0, Dia(1, i1)), double(i1, a0, Dia(2, a1), accessibility=True),
               double(i1, a1, p))
    assert "dec" in {v.condition for v in is_saturated(b, Mode.HDPL_DEC)}
    assert "dec" not in {v.condition for v in is_saturated(b, Mode.HDPL)}


# --- right nominals and classes --------------------------------------------

def test_right_nominals():
    assert right_nominals(branch(single1(i1, i2))) == ({i2}, set())
    assert right_nominals(branch(double(i0, a0, Not(p)))) == (set(), set())


def test_right_nominal_after_red1():
    v = prove(parse("~i1"), "hpl")
    b = v.tableau.branches[v.branch]
    assert i1 in right_nominals(b)[0]


def test_classes():
    b = branch(single1(i1, i2), single1(i2, i2), single1(i2, i1), single1(i1, i1))
    assert nominal_classes(b).partition(1) == {frozenset({i1, i2})}
    assert nominal_classes(Branch(0)).partition(1) == set()
    c = nominal_classes(branch(single2(a1, a1), single2(a2, a2)))
    assert c.partition(2) == {frozenset({a1}), frozenset({a2})}


def test_asymmetric_identity_is_reported():
    with pytest.raises(NonEquivalenceError):
        nominal_classes(branch(single1(i1, i2), single1(i2, i2), single1(i1, i1)))


def test_urfathers():
    b = branch(double(i0, a0, Not(p)))
    cls = nominal_classes(b)
    assert urfather(b, cls, i0) == i0 and urfather(b, cls, a0) == a0
    b = branch(single1(i1, i2), single1(i2, i2))
    assert urfather(b, nominal_classes(b), i1) == i2
    assert Urfathers(b)(i1) == i2


# --- extraction ------------------------------------------------------------

def test_extract_trivial_branch():
    v = prove(p, "hpl")
    m = v.model
    assert (m.w1, m.w2, m.r1) == (("i0",), ("a0",), frozenset())
    assert m.val == {"p1": frozenset()}
    assert v.designated == ("i0", "a0")
    assert verify_extraction(v.tableau, v.branch, v.extracted).failures == []


def test_axdec_countermodel_has_noncommuting_shape():
    v = prove(parse(AXDEC), "hdpl")
    m = v.model
    assert len(m.r1) == 1
    (x, x2), = m.r1
    assert not m.r2_at(x) and m.r2_at(x2)
    assert not evaluate(m, v.designated, parse(AXDEC))


@pytest.mark.parametrize("text", [COMMUTE, "<1><2>p1 -> <1>p1", "[1]<2>p1 -> <2>[1]p1"])
def test_dec_mode_countermodels_are_decreasing(text):
    v = prove(parse(text), "hdpl-dec", Budget(2000))
    assert isinstance(v, Refuted)
    assert is_decreasing(v.model)
    assert verdict_problems(v) == []


def test_corrupted_model_is_caught():
    v = prove(parse("<1>p1 -> [1]p1"), "hpl")
    assert isinstance(v, Refuted) and v.model.r1
    broken = dataclasses.replace(v.model, r1=frozenset())
    em = ExtractedModel(broken, v.designated, v.extracted.urfathers)
    assert verify_extraction(v.tableau, v.branch, em).failures


def test_invariants_hold_on_refutations():
    for text, mode in [(AXDEC, "hdpl"), (COMMUTE, "hdpl"), ("@i1 <1>i2 & @i1 i2 -> p1", "hpl")]:
        v = prove(parse(text), mode)
        assert verdict_problems(v) == []
        b = v.tableau.branches[v.branch]
        assert urfather_problems(v.tableau, b) == []


def test_invariants_hold_on_proofs():
    v = prove(parse(AXDEC), "hdpl-dec")
    assert tableau_problems(v.tableau) == []


def test_one_directional_identity_extracts_correctly():
    # edges must be read at urfather prefixes only; otherwise a box misses a successor
    for text, mode in [("~(@i1 i2 & @i1 <1>p1 & @i2 [1]p2)", "hpl"),
                       ("~(@a1 a2 & @a1 <2>p1 & @a2 [2]p2)", "hpl"),
                       ("~<1><2>i1", "hdpl-dec")]:
        v = prove(parse(text), mode)
        assert not evaluate(v.model, v.designated, parse(text), strict=True)
        assert verdict_problems(v) == []
