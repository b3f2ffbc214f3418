import json

import jsonschema
import pytest

from hybtab import modelio
from hybtab.modelio import ModelFormatError, dump_text, from_json, parse_text, to_json
from hybtab.semantics import KripkeProduct

from conftest import DATA


def test_model_file_round_trips(noncommuting):
    m, designated = parse_text((DATA / "noncommuting.model").read_text())
    assert designated == ("x1", "y1")
    assert to_json(m) == to_json(noncommuting)
    again, d2 = parse_text(dump_text(m, designated))
    assert to_json(again, d2) == to_json(m, designated)


def test_json_round_trip_and_schema(noncommuting):
    data = to_json(noncommuting, ("x1", "y1"))
    jsonschema.validate(data, modelio.load_schema("model"))
    m, d = from_json(json.loads(json.dumps(data)))
    assert to_json(m, d) == data


def test_product_model_schema():
    m = KripkeProduct(w1=("x",), w2=("y", "z"), r1=frozenset(), r2=frozenset({("y", "z")}),
                      val={"p1": frozenset()}, nom2={"a1": "z"})
    jsonschema.validate(to_json(m), modelio.load_schema("model"))
    assert parse_text(dump_text(m))[0] == m


@pytest.mark.parametrize("text", [
    "worlds1 x\nworlds2 y\nbogus 1",
    "worlds1 x\nworlds2 y\nr1 x",
    "worlds1 x\nworlds2 y\nr1 x z",
    "worlds1 x\nworlds2 y\nnom q1 x",
    "worlds1 x\nworlds2 y\nr2 y y\nr2@x y y",
    "worlds1 x\nworlds2 y\ndesignated x w",
])
def test_bad_text(text):
    with pytest.raises(ModelFormatError):
        parse_text(text)


def test_bad_json():
    with pytest.raises(ModelFormatError):
        from_json({"kind": "product"})
