"""Frozen traces for the two worked tableaux, plus a line-by-line match with the hand-built ones.

Regenerate with ``HYBTAB_REGEN_GOLDEN=1 pytest tests/test_golden.py`` after an intended change.
"""

import json
import os

import jsonschema
import pytest

from hybtab.engine import Budget, prove
from hybtab.modelio import load_schema
from hybtab.syntax import parse

from conftest import AXDEC, LOOP, GOLDEN

CASES = {
    "axdec_hdpl_dec.jsonl": (AXDEC, "hdpl-dec", False, None),
    "loop_hpl_derived_first18.jsonl": (LOOP, "hpl", True, 18),
}

# hand-built AxDec tableau, lines 1-13, with a -> a1, b -> a2 and the fresh a1 -> a3
AXDEC_HAND_LINES = [
    "@i0 @a0 (<1>@a1 <2>a2 & ~@a1 <2>a2)",
    "@i0 @a0 <1>@a1 <2>a2",
    "@i0 @a0 ~@a1 <2>a2",
    "@i0 <1>i1",
    "@i1 @a0 @a1 <2>a2",
    "@i0 @a1 ~<2>a2",
    "@i1 @a1 <2>a2",
    "@i1 @a1 <2>a3",
    "@i1 @a3 a2",
    "@i0 @a1 <2>a3",
    "@i0 @a3 ~a2",
    "@a3 a2",
    "@a3 ~a2",
]

# hand-built looping tableau, lines 2-18, with p, q, r -> p1, p2, p3
LOOP_HAND_LINES = [
    "@i0 @a0 <1>p1",
    "@i0 @a0 [1]<2>p2",
    "@i0 @a0 [2]<1>p3",
    "@i0 <1>i1",
    "@i1 @a0 p1",
    "@i1 @a0 <2>p2",
    "@a0 <2>a1",
    "@i1 @a1 p2",
    "@i0 @a1 <1>p3",
    "@i0 <1>i2",
    "@i2 @a1 p3",
    "@i2 @a0 <2>p2",
    "@a0 <2>a2",
    "@i2 @a2 p2",
    "@i0 @a2 <1>p3",
    "@i0 <1>i3",
    "@i3 @a2 p3",
]


def _run(name):
    text, mode, derived, cut = CASES[name]
    trace = prove(parse(text), mode, Budget(200), derived).tableau.trace
    return trace[:cut] if cut else trace


def _load(name):
    return [json.loads(line) for line in (GOLDEN / name).read_text().splitlines()]


@pytest.mark.parametrize("name", sorted(CASES))
def test_trace_matches_golden(name):
    trace = _run(name)
    if os.environ.get("HYBTAB_REGEN_GOLDEN"):
        (GOLDEN / name).write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in trace))
    assert trace == _load(name)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_records_validate(name):
    schema = load_schema("trace_record")
    for rec in _load(name):
        jsonschema.validate(rec, schema)


def _added(records):
    return [f for r in records for f in r["added"]]


def test_axdec_hand_lines_all_derived():
    added = _added(_load("axdec_hdpl_dec.jsonl"))
    assert set(AXDEC_HAND_LINES) <= set(added)
    # the two contradictory lines end the branch
    assert added[-1] == "@a3 ~a2"


def test_axdec_flagged_rules():
    recs = _load("axdec_hdpl_dec.jsonl")
    flagged = {r["rule"] for r in recs if r["accessibility"]}
    assert flagged == {"Dia2d", "Dec"}


def test_loop_lines_appear_in_hand_order():
    recs = _load("loop_hpl_derived_first18.jsonl")
    # the conjunction is split in two binary steps, so only its set of conjuncts matches
    assert set(LOOP_HAND_LINES[:3]) <= set(_added(recs[:3]))
    added = _added(recs)
    positions = [added.index(line) for line in LOOP_HAND_LINES[3:]]
    assert positions == sorted(positions)


def test_loop_repeats():
    recs = _load("loop_hpl_derived_first18.jsonl")
    rules = [r["rule"] for r in recs[3:]]
    period = ["Dia1", "Box1", "Dia2", "Box2"]
    assert rules[:12] == period * 3
