import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

from src.errors import ConfigurationError, DimensionError, RangeError
from src.operators import (ComplexMatrix, StateVector, angular_momentum_matrix, apply,
                           basis_state, commutator, diagonal_matrix, expectation,
                           hermiticity_defect, identity_matrix, load_matrix_json,
                           matrix_from_dict, matrix_to_dict, save_matrix_csv,
                           save_matrix_json, shift_matrix, spectral_norm_estimate,
                           state_from_dict, state_to_dict, trace)


@pytest.fixture
def hermitian():
    entries = np.array([[1.0, 2 - 1j, 0.5j],
                        [2 + 1j, -3.0, 0.0],
                        [-0.5j, 0.0, 0.25]])
    return ComplexMatrix(lo=-1, hi=1, entries=entries)


def test_indexing_by_basis_labels(hermitian):
    assert hermitian[-1, 0] == 2 - 1j
    assert hermitian[1, -1] == -0.5j
    with pytest.raises(RangeError):
        hermitian[2, 0]


def test_entries_are_read_only(hermitian):
    with pytest.raises(ValueError):
        hermitian.entries[0, 0] = 5.0
    copy = hermitian.to_array()
    copy[0, 0] = 5.0
    assert hermitian[-1, -1] == 1.0


def test_shape_and_range_checks(hermitian):
    with pytest.raises(DimensionError):
        ComplexMatrix(lo=0, hi=1, entries=np.eye(3))
    with pytest.raises(RangeError):
        ComplexMatrix(lo=2, hi=1, entries=np.eye(0))
    with pytest.raises(DimensionError):
        hermitian @ identity_matrix(0, 2)


def test_algebra(hermitian):
    assert hermiticity_defect(hermitian) == 0.0
    assert trace(hermitian) == pytest.approx(-1.75)
    assert (hermitian @ identity_matrix(-1, 1)).max_abs_diff(hermitian) == 0.0
    assert (2 * hermitian - hermitian - hermitian).max_abs_diff(0 * hermitian) == 0.0
    assert commutator(hermitian, hermitian).max_abs_diff(0 * hermitian) == 0.0


def test_submatrix_keeps_labels():
    L = angular_momentum_matrix(3, hbar=0.5)
    inner = L.submatrix(-1, 1)
    assert (inner.lo, inner.hi) == (-1, 1)
    assert inner[1, 1] == 0.5
    with pytest.raises(RangeError):
        L.submatrix(-4, 0)


def test_state_vector_padding_and_expectation():
    psi = StateVector.from_coefficients([3.0, 4.0], lo=0).normalized()
    assert psi.is_normalized()
    assert psi.coefficient(5) == 0
    L = angular_momentum_matrix(2)
    assert expectation(L, psi) == pytest.approx(16.0 / 25.0)
    image = apply(L, psi)
    assert (image.lo, image.hi) == (-2, 2)
    assert image.coefficient(1) == pytest.approx(0.8)

    with pytest.raises(DimensionError):
        expectation(angular_momentum_matrix(0), psi)
    with pytest.raises(ValueError):
        StateVector.from_coefficients([0.0, 0.0], lo=0).normalized()


def test_basis_state_range():
    assert basis_state(2, -2, 2).coefficient(2) == 1.0
    with pytest.raises(RangeError):
        basis_state(3, -2, 2)


def test_shift_matrix_moves_basis_states():
    U = shift_matrix(1, 2)
    assert apply(U, basis_state(0, -2, 2)).coefficient(1) == 1.0
    assert apply(U, basis_state(2, -2, 2)).norm() == 0.0
    # exp(i Theta) exp(-i Theta) loses the boundary state under truncation
    product = shift_matrix(1, 2) @ shift_matrix(-1, 2)
    assert_allclose(np.diag(product.entries), [0, 1, 1, 1, 1])


@given(N=st.integers(0, 6), n=st.integers(-6, 6))
def test_angular_momentum_shift_commutator(N, n):
    L = angular_momentum_matrix(N)
    U = shift_matrix(n, N)
    residual = commutator(L, U) - n * U
    for k in range(-N, N + 1):
        assert apply(residual, basis_state(k, -N, N)).norm() == 0.0


@given(N=st.integers(1, 5), n=st.integers(-5, 5),
       hbar=st.floats(0.05, 3.0, allow_nan=False, allow_infinity=False))
def test_angular_momentum_shift_commutator_any_hbar(N, n, hbar):
    L = angular_momentum_matrix(N, hbar=hbar)
    U = shift_matrix(n, N)
    residual = commutator(L, U) - (hbar * n) * U
    assert np.max(np.abs(residual.entries)) <= 1e-14 * max(1.0, hbar * N)


def test_spectral_norm_estimate():
    assert spectral_norm_estimate(diagonal_matrix([1.0, -2.0, 3.0], lo=0)) == pytest.approx(3.0, rel=1e-8)
    assert spectral_norm_estimate(0 * identity_matrix(0, 3)) == 0.0


def test_json_export(tmp_path, hermitian):
    path = tmp_path / 'matrices' / 'h.json'
    save_matrix_json(hermitian, path)
    loaded = load_matrix_json(path)
    assert (loaded.lo, loaded.hi) == (-1, 1)
    assert loaded.max_abs_diff(hermitian) == 0.0

    data = matrix_to_dict(hermitian)
    assert data['entries'][1] == [2.0, -1.0]
    data['entries'] = data['entries'][:-1]
    with pytest.raises(DimensionError):
        matrix_from_dict(data)


def test_csv_export(tmp_path, hermitian):
    import pandas as pd

    path = tmp_path / 'h.csv'
    save_matrix_csv(hermitian, path)
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['j', 'k', 're', 'im']
    assert len(frame) == 9
    row = frame[(frame.j == -1) & (frame.k == 0)].iloc[0]
    assert (row.re, row.im) == (2.0, -1.0)


def test_state_dict_export():
    psi = StateVector.from_coefficients([0.6, 0.8j], lo=-1)
    data = state_to_dict(psi)
    assert data['coefficients'][1] == [0.0, 0.8]
    loaded = state_from_dict(data)
    assert (loaded.lo, loaded.hi) == (-1, 0)
    assert_allclose(loaded.coefficients, psi.coefficients)


@pytest.mark.parametrize('data', [
    {'lo': 0, 'hi': 1},
    {'lo': 0, 'hi': 1, 'coefficients': [[1, 0], [0]]},
    {'lo': 0, 'hi': 1, 'coefficients': [1, 0]},
    {'lo': 'zero', 'hi': 1, 'coefficients': [[1, 0], [0, 0]]},
    [[1, 0], [0, 0]],
])
def test_malformed_state_dict(data):
    with pytest.raises(ConfigurationError):
        state_from_dict(data)


def test_malformed_matrix_dict(hermitian):
    data = matrix_to_dict(hermitian)
    del data['hi']
    with pytest.raises(ConfigurationError):
        matrix_from_dict(data)
    data = matrix_to_dict(hermitian)
    data['entries'][0] = [1.0]
    with pytest.raises(ConfigurationError):
        matrix_from_dict(data)
