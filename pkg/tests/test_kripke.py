import json
import random

import pytest
from hypothesis import given

from conftest import formulas, models
from oracles import forces
from mimpl.formula import Atom, parse, phi
from mimpl.kripke import (KripkeModel, ModelError, _rooted_orders, find_countermodel, load_model,
                          dump_model, model_from_json, model_to_json, random_model, satisfies,
                          valid_in)

PEIRCE = parse("((A->B)->A)->A")


def test_build_closes_order():
    m = KripkeModel.build(3, [(0, 1), (1, 2)], {2: ["A"]})
    assert m.leq(0, 2) and not m.leq(2, 0)


@pytest.mark.parametrize("order,val", [
    ([(0, 1), (1, 0)], {}),           # antisymmetry
    ([(0, 1)], {0: ["A"]}),           # monotonicity
])
def test_invalid_models(order, val):
    with pytest.raises(ModelError):
        KripkeModel.build(2, order, val)


def test_bad_world():
    m = KripkeModel.build(1)
    with pytest.raises(ModelError):
        satisfies(m, 3, Atom("A"))


def test_peirce_two_world_model():
    m = KripkeModel.build(2, [(0, 1)], {1: ["A"]})
    assert not satisfies(m, 0, PEIRCE)
    assert satisfies(m, 1, PEIRCE)


def test_find_countermodel_peirce_shape():
    m = find_countermodel(PEIRCE, 3)
    assert m.size == 2
    assert m.valuation[0] == frozenset() and m.valuation[1] == {"A"}
    assert m.leq(0, 1)


def test_find_countermodel_none_for_theorem():
    assert find_countermodel(parse("(A->B->C)->(A->B)->A->C"), 3) is None
    assert find_countermodel(phi(1), 3) is None


def test_rooted_order_counts():
    # rooted posets up to isomorphism; a rooted poset on k points is a root
    # below an arbitrary poset on k - 1 points (OEIS A000112: 1, 1, 2, 5, 16)
    assert [len(_rooted_orders(k)) for k in range(1, 6)] == [1, 1, 2, 5, 16]


def test_json_roundtrip(tmp_path):
    m = random_model(4, 4)
    assert model_from_json(json.loads(json.dumps(model_to_json(m)))) == m
    dump_model(m, tmp_path / "m.json")
    assert load_model(tmp_path / "m.json") == m


def _naive(m, w, f):
    worlds = range(m.size)
    return forces(worlds, m.leq, m.valuation, w, f)


@given(models(), formulas())
def test_matches_naive_forcing(m, f):
    for w in range(m.size):
        assert satisfies(m, w, f) == _naive(m, w, f)


@given(models(), formulas())
def test_persistence(m, f):
    for w in range(m.size):
        if satisfies(m, w, f):
            assert all(satisfies(m, v, f) for v in range(m.size) if m.leq(w, v))


@given(formulas())
def test_all_true_world_satisfies_everything(f):
    m = KripkeModel.build(1, (), {0: ["A", "B", "C"]})
    assert satisfies(m, 0, f)


@given(formulas(3))
def test_countermodel_really_fails(f):
    m = find_countermodel(f, 2)
    if m is not None:
        assert not valid_in(m, f)
        assert not _naive(m, 0, f)


def test_random_model_is_deterministic():
    assert random_model(7, 5) == random_model(7, 5)
    assert random_model(random.Random(7), 5) == random_model(7, 5)
