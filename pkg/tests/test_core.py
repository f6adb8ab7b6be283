import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qae.core import (
    EncodingConfig,
    NotSymmetric,
    Qubo,
    SymmetricMatrix,
    ZeroVector,
    max_abs_element,
    rayleigh_quotient,
    spectral_scale,
)
from qae.reference import eigh_reference

from conftest import random_symmetric


def test_max_abs_element_examples(rng):
    assert max_abs_element(SymmetricMatrix([[0.0]])) == 0.0
    assert max_abs_element(np.diag([1.0, -3.0])) == 3.0
    a = random_symmetric(rng, 5)
    best = 0.0
    for i in range(5):
        for j in range(5):
            best = max(best, abs(a[i][j]))
    assert max_abs_element(a) == best


def test_rayleigh_quotient_examples():
    assert rayleigh_quotient(np.eye(2), [0.3, 0.4]) == pytest.approx(1.0, abs=1e-15)
    assert rayleigh_quotient(np.diag([1.0, 2.0]), [1.0, 0.0]) == 1.0
    assert rayleigh_quotient([[0.0, 1.0], [1.0, 0.0]], [1.0, 1.0]) == pytest.approx(1.0, abs=1e-15)


def test_rayleigh_quotient_zero_vector():
    with pytest.raises(ZeroVector):
        rayleigh_quotient(np.eye(2), [0.0, 0.0])


def test_symmetric_matrix_repairs_roundoff_and_rejects_asymmetry():
    a = np.array([[1.0, 0.5], [0.5 + 1e-14, 2.0]])
    S = SymmetricMatrix(a)
    assert S.entries[0, 1] == S.entries[1, 0]
    with pytest.raises(NotSymmetric):
        SymmetricMatrix([[1.0, 0.5], [0.4, 2.0]])
    with pytest.raises(ValueError):
        SymmetricMatrix([[np.nan]])
    with pytest.raises(ValueError):
        SymmetricMatrix(np.zeros((0, 0)))


def test_symmetric_matrix_is_read_only():
    S = SymmetricMatrix(np.eye(2))
    with pytest.raises(ValueError):
        S.entries[0, 0] = 5.0


def test_encoding_config():
    assert EncodingConfig(10).resolution == 2.0**-9
    assert EncodingConfig(10).qubo_size(133) == 1330
    with pytest.raises(ValueError):
        EncodingConfig(1)


def test_spectral_scale_floor():
    assert spectral_scale(np.diag([0.1, -0.2])) == 1.0
    assert spectral_scale(np.diag([10.0, -20.0])) == 20.0


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(0, 2**32 - 1),
    st.floats(1e-3, 1e3) | st.floats(-1e3, -1e-3),
)
def test_rayleigh_quotient_scale_invariant(n, seed, c):
    rng = np.random.default_rng(seed)
    a = random_symmetric(rng, n)
    v = rng.normal(size=n)
    r1, r2 = rayleigh_quotient(a, v), rayleigh_quotient(a, c * v)
    assert abs(r1 - r2) <= 1e-12 * max(1.0, abs(r1))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_rayleigh_quotient_variational_sandwich(n, seed):
    rng = np.random.default_rng(seed)
    a = random_symmetric(rng, n, -5, 5)
    v = rng.normal(size=n)
    vals = eigh_reference(a).values
    tol = 1e-10 * spectral_scale(a)
    assert vals[0] - tol <= rayleigh_quotient(a, v) <= vals[-1] + tol


def test_qubo_symmetric_roundtrip_is_idempotent(rng):
    for _ in range(20):
        Q = Qubo(np.triu(rng.normal(size=(6, 6))), 0.3)
        back = Qubo.from_symmetric(Q.to_symmetric(), Q.offset)
        assert np.allclose(back.weights, Q.weights, atol=1e-15)
        S = Q.to_symmetric()
        assert np.array_equal(S, S.T)


def test_qubo_rejects_lower_entries():
    with pytest.raises(ValueError):
        Qubo(np.array([[1.0, 0.0], [2.0, 1.0]]))


def test_qubo_dict_roundtrip():
    Q = Qubo.from_dict(3, {(0, 0): -1.0, (2, 1): 2.0}, offset=0.5)
    assert Q.weights[1, 2] == 2.0
    assert Qubo.from_dict(3, Q.to_dict(), 0.5).weights.tolist() == Q.weights.tolist()
