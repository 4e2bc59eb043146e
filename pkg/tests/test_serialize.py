import json

import numpy as np

from hrnr import geometry as geo
from hrnr import serialize as ser
from hrnr.codes import construct_code
from hrnr.omega import omega_k
from hrnr.spectrum import equally_spaced


def test_complex_and_matrix_round_trip(rng):
    M = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    back = ser.matrix_from_json(json.loads(ser.dumps(ser.matrix_to_json(M))))
    assert np.array_equal(back, M)
    assert ser.complex_from_json([1, 2]) == 1 + 2j
    assert ser.complex_from_json({"re": 3}) == 3


def test_polygon_round_trip():
    poly = omega_k(equally_spaced(7), 2).polygon
    back = ser.polygon_from_json(json.loads(ser.dumps(ser.polygon_to_json(poly))))
    assert back == poly


def test_spectrum_inputs():
    spec = ser.spectrum_from_json({"angles": [0, 90, 180], "unit": "degrees"})
    assert np.allclose(spec.degrees(), [0, 90, 180])
    U = np.diag(np.exp(1j * np.array([0.1, 0.2])))
    spec2 = ser.spectrum_from_json({"matrix": ser.matrix_to_json(U)})
    assert np.allclose(spec2.thetas, [0.1, 0.2])


def test_code_round_trip():
    code = construct_code(equally_spaced(6), 2)
    back = ser.code_from_json(json.loads(ser.dumps(ser.code_to_json(code))))
    assert back.lam == code.lam
    assert np.array_equal(back.projection, code.projection)
    assert back.strategy == code.strategy


def test_dumps_is_deterministic():
    obj = {"b": 1j, "a": np.arange(3), "c": np.float64(2.5)}
    assert ser.dumps(obj) == ser.dumps(dict(reversed(list(obj.items()))))
    assert json.loads(ser.dumps(obj))["b"] == {"re": 0.0, "im": 1.0}
