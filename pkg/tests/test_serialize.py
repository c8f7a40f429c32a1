import json
from importlib import resources
from pathlib import Path

import pytest

from stratpl.datum import random_datum
from stratpl.serialize import (SCHEMAS, ParseError, SchemaError, UnsupportedVersionError,
                               check_schema, config_from_dict, config_to_dict, datum_from_dict,
                               datum_to_dict, deserialize, serialize)
from stratpl.stabilize import data_equal, stabilize_closed

DOCS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def test_round_trip_oracle(classical, four, resonant):
    for pd, aux in (classical, four, resonant):
        text = serialize(pd, aux)
        back, back_aux = deserialize(text)
        assert data_equal(back, pd) and back_aux == aux
        assert serialize(back, back_aux) == text


def test_round_trip_stabilized(resonant):
    pd, aux = resonant
    res = stabilize_closed(pd, aux, 2).result
    back, none = deserialize(serialize(res))
    assert none is None and data_equal(back, res)


def test_round_trip_random(Q12):
    pd = random_datum(Q12, 3, max_dim=3)
    assert data_equal(deserialize(serialize(pd))[0], pd)


def test_canonical_key_order(classical):
    text = serialize(*classical)
    doc = json.loads(text)
    assert list(doc) == sorted(doc)


def test_block_shape_error_names_block(classical):
    doc = datum_to_dict(*classical)
    doc["pairings"]["P1"]["1"] = [["1", "0"]]
    with pytest.raises(SchemaError) as err:
        datum_from_dict(doc)
    assert err.value.path == "pairings.P1.1"
    assert "shape 1x2" in str(err.value)


def test_unknown_version(classical):
    doc = datum_to_dict(*classical)
    doc["schema"] = "pl-datum-v2"
    with pytest.raises(UnsupportedVersionError, match="unsupported version"):
        datum_from_dict(doc)


def test_structural_violation_path(classical):
    doc = datum_to_dict(*classical)
    del doc["sides"]["alpha"]["maps"]["Var"]
    with pytest.raises(SchemaError) as err:
        datum_from_dict(doc)
    assert err.value.path.startswith("sides.alpha")


def test_bad_scalar_path(classical):
    doc = datum_to_dict(*classical)
    doc["pairings"]["P2"]["1"] = [["s +* t"]]
    with pytest.raises(SchemaError) as err:
        datum_from_dict(doc)
    assert err.value.path == "pairings.P2.1[0][0]"


def test_parse_error_location():
    with pytest.raises(ParseError, match=r"<string>:2:"):
        deserialize('{\n  "schema": ,}')


def test_config_round_trip(Q12):
    from conftest import disc
    cfg = disc([Q12.zeta(1), Q12.zeta(2)], Q12.zeta(5))
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_config_bad_position():
    doc = {"schema": "disc-config-v1", "mode": "cyclotomic:4",
           "a_punctures": [{"position": "1/0", "weight": "z"}], "x_puncture": None}
    with pytest.raises(SchemaError):
        config_from_dict(doc)


def test_non_object():
    with pytest.raises(SchemaError):
        check_schema([], "scenario-v1")


@pytest.mark.parametrize("name", SCHEMAS)
def test_docs_schemas_match_package(name):
    shipped = resources.files("stratpl").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    assert (DOCS / f"{name}.schema.json").read_text("utf-8") == shipped
    json.loads(shipped)
