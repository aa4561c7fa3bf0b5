import json
from fractions import Fraction

import numpy as np
import pytest

from openchain import chain, linalg, scalars, serialize, ssep
from openchain.chain import BoundaryParams
from openchain.errors import SizeLimitExceeded
from openchain.scalars import EXACT
from openchain.ssep import SSEPRates

F = Fraction


def test_operator_round_trip():
    op = chain.transfer(F(2, 3), 3, BoundaryParams(F(1, 2), F(-1, 3), F(5, 7)))
    obj = json.loads(serialize.dumps(serialize.operator_to_json(op)))
    assert obj["n_sites"] == 3
    assert np.array_equal(serialize.operator_from_json(obj), op)


def test_float_operator_round_trip():
    op = chain.transfer(0.4, 2, BoundaryParams(0.3, 0.2, 0.1))
    back = serialize.operator_from_json(json.loads(serialize.dumps(serialize.operator_to_json(op))))
    assert np.array_equal(back, op)


def test_operator_csv():
    op = scalars.asarray([[1, F(1, 2)], [0, -3]], EXACT)
    assert serialize.operator_to_csv(op) == "1/1,1/2\n0/1,-3/1\n"
    with pytest.raises(SizeLimitExceeded):
        serialize.operator_to_csv(scalars.zeros((128, 128), EXACT))


def test_vector_round_trip():
    v = scalars.asarray([0, F(1, 3), 0, F(-2)], EXACT)
    obj = serialize.vector_to_json(v)
    assert obj == {"1": "1/3", "3": "-2/1"}
    assert list(serialize.vector_from_json(obj, 2)) == list(v)


def test_probabilities_round_trip():
    probs = ssep.probabilities(3, SSEPRates(F(1), F(2), F(1, 3), F(1, 2)))
    obj = json.loads(serialize.dumps(serialize.probabilities_to_json(probs)))
    assert list(obj) == ["000", "001", "010", "011", "100", "101", "110", "111"]
    assert list(serialize.probabilities_from_json(obj)) == list(probs)
    rows = serialize.probabilities_to_csv(probs).splitlines()
    assert rows[0] == "config,value" and len(rows) == 9


def test_observable_schemas():
    assert serialize.correlator_to_json((1, 3), F(1, 4)) == {"sites": [1, 3], "value": "1/4"}
    assert serialize.density_to_csv([F(3, 4), F(1, 4)]) == "site,value\n1,3/4\n2,1/4\n"
    assert serialize.density_to_json([F(1, 2)]) == [{"site": 1, "value": "1/2"}]
    assert serialize.config_string(5, 4) == "0101"


def test_dumps_keeps_insertion_order():
    text = serialize.dumps({"b": ["1/2"], "a": 1})
    assert text.endswith("\n") and text.index('"b"') < text.index('"a"')
