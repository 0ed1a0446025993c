import json

import pytest
from hypothesis import given

from homlie.actions import adjoint_action
from homlie.algebra import heisenberg, nilpotent_alpha_example
from homlie.exactlin import GF, QQ
from homlie.serialize import (
    ParseError,
    action_from_json,
    action_to_json,
    algebra_from_json,
    algebra_to_json,
    dumps,
    load_algebra,
    load_json,
    save_algebra,
)

from conftest import random_algebras


def same(A, B):
    return A.field == B.field and A.field.equal(A.table, B.table) and A.field.equal(A.alpha, B.alpha)


@given(random_algebras(hi=5))
def test_roundtrip_rational(L):
    assert same(algebra_from_json(json.loads(dumps(algebra_to_json(L)))), L)


@given(random_algebras(hi=4, field=GF(7)))
def test_roundtrip_prime(L):
    doc = algebra_to_json(L)
    assert doc["field"] == {"prime": 7}
    assert same(algebra_from_json(doc), L)


def test_document_layout():
    doc = algebra_to_json(nilpotent_alpha_example())
    assert doc["dim"] == 3
    assert doc["bracket"] == [{"i": 0, "j": 1, "value": ["0/1", "0/1", "1/1"]}]
    # alpha[i] lists the coordinates of alpha(e_i)
    assert doc["alpha"][0] == ["0/1", "0/1", "1/1"]
    assert doc["alpha"][2] == ["0/1", "0/1", "0/1"]


def test_missing_alpha_means_identity():
    L = algebra_from_json({"dim": 2, "bracket": []})
    assert QQ.equal(L.alpha, QQ.eye(2))


def test_dumps_is_sorted():
    text = dumps({"b": 1, "a": {"d": 2, "c": 3}})
    assert text.index('"a"') < text.index('"b"')
    assert text.index('"c"') < text.index('"d"')


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"dim": -1},
        {"dim": 2, "field": "real"},
        {"dim": 2, "field": {"prime": 6}},
        {"dim": 2, "bracket": [{"i": 1, "j": 0, "value": [0, 0]}]},
        {"dim": 2, "bracket": [{"i": 0, "j": 1, "value": [0]}]},
        {"dim": 2, "bracket": [{"i": 0, "j": 1, "value": ["x", 0]}]},
        {"dim": 2, "bracket": [{"i": 0, "j": 1, "value": [0, 0]}, {"i": 0, "j": 1, "value": [0, 0]}]},
        {"dim": 2, "alpha": [[1, 0]]},
        {"dim": 2, "basis": ["a"]},
    ],
)
def test_parse_errors(doc):
    with pytest.raises(ParseError):
        algebra_from_json(doc)


def test_load_and_save(tmp_path):
    p = tmp_path / "h.json"
    save_algebra(heisenberg(1), p)
    assert same(load_algebra(p), heisenberg(1))
    (tmp_path / "bad.json").write_text("{nope")
    with pytest.raises(ParseError):
        load_json(tmp_path / "bad.json")
    with pytest.raises(ParseError):
        load_json(tmp_path / "missing.json")


def test_action_roundtrip():
    act = adjoint_action(heisenberg(1))
    back = action_from_json(action_to_json(act))
    assert QQ.equal(back.tensor, act.tensor)
