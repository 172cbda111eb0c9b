import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad_vec

from src.errors import ConfigurationError, DimensionError, DomainError, RangeError
from src.observable import make_builtin
from src.operators import angular_momentum_matrix, hermiticity_defect
from src.phase import (NumberStateVector, embed, gw_apply, gw_phase_element, gw_phase_matrix,
                       gw_variance_limit, gw_variance_harmonic, gw_variance_series,
                       load_state_json, naimark_compress, number_operator_matrix,
                       number_state, number_state_phase_variance, pb_distribution,
                       pb_expectation, pb_phase_element, pb_phase_matrix, pb_phase_state,
                       pb_phases, phase_expectation, phase_variance, pov_density,
                       pov_distribution, pov_moment, pov_probability, save_state_json)
from src.quantizer import WeylQuantizer


def test_number_state_validation():
    with pytest.raises(ConfigurationError):
        NumberStateVector.from_coefficients([1.0, 1.0])
    with pytest.raises(DimensionError):
        NumberStateVector(s=2, coefficients=np.array([1.0, 0.0]))
    with pytest.raises(RangeError):
        number_state(3, 2)
    psi = NumberStateVector.from_coefficients([3.0, 4.0j], normalize=True)
    assert_allclose(psi.probabilities, [0.36, 0.64])


def test_state_json_export(tmp_path, two_level_state):
    path = tmp_path / 'state.json'
    save_state_json(two_level_state, path)
    loaded = load_state_json(path)
    assert loaded.s == 1
    assert_allclose(loaded.coefficients, two_level_state.coefficients)


def test_embedding_is_isometric(random_state):
    psi = random_state(4)
    circle = embed(psi, N=6)
    assert (circle.lo, circle.hi) == (-6, 6)
    assert circle.norm() == pytest.approx(1.0)
    assert circle.coefficient(-1) == 0
    assert circle.coefficient(3) == psi.coefficients[3]
    with pytest.raises(DimensionError):
        embed(psi, N=3)


def test_gw_matrix_at_s_one():
    assert_allclose(gw_phase_matrix(1).entries, [[0, -1j], [1j, 0]], atol=1e-15)
    assert gw_phase_element(3, 3, phi0=0.0) == pytest.approx(np.pi)


def test_gw_is_compression_of_circle_angle():
    s = 12
    # g(Phi) = Phi quantized on the circle as -Theta with symmetric ordering
    circle = WeylQuantizer(N=s).weyl_apply_closed_symmetric(
        make_builtin('phase_pullback', g='identity'))
    assert naimark_compress(circle).max_abs_diff(gw_phase_matrix(s)) < 1e-13


def test_number_operator_is_compression_of_momentum():
    assert naimark_compress(angular_momentum_matrix(5)).max_abs_diff(
        number_operator_matrix(5)) == 0.0
    with pytest.raises(RangeError):
        naimark_compress(number_operator_matrix(3).submatrix(1, 3))


def test_gw_apply_matches_dense_matrix(random_state):
    psi = random_state(30)
    assert_allclose(gw_apply(psi), gw_phase_matrix(30).entries @ psi.coefficients, atol=1e-12)


def test_gw_variance_of_number_states(caplog):
    for n in (1, 2, 3):
        variance = number_state_phase_variance('gw', n, 40)
        assert variance == pytest.approx(gw_variance_series(n, 40), abs=1e-8)
    assert 'sum 1/k' in caplog.text
    assert gw_variance_harmonic(1) - gw_variance_limit(1) == pytest.approx(0.0)
    assert gw_variance_harmonic(2) - gw_variance_limit(2) == pytest.approx(0.25)


def test_gw_variance_of_vacuum_at_large_truncation():
    variance = number_state_phase_variance('gw', 0, 10_000)
    assert abs(variance - np.pi ** 2 / 6) < 1e-4
    assert variance < np.pi ** 2 / 6


def test_pb_at_s_one():
    phi = pb_phase_matrix(1)
    assert hermiticity_defect(phi) < 1e-14
    assert phi[0, 0] == pytest.approx(-np.pi / 2)
    assert_allclose(np.linalg.eigvalsh(phi.entries), [-np.pi, 0.0], atol=1e-14)
    assert number_state_phase_variance('pb', 0, 1) == pytest.approx(np.pi ** 2 / 4)


def test_pb_forms_agree():
    for s in (1, 4, 9):
        explicit = pb_phase_matrix(s, phi0=0.3)
        spectral = pb_phase_matrix(s, phi0=0.3, form='spectral')
        assert explicit.max_abs_diff(spectral) < 1e-12
    with pytest.raises(ConfigurationError):
        pb_phase_matrix(2, form='dense')


def test_pb_phase_states_are_orthonormal():
    s = 6
    states = np.array([pb_phase_state(m, s).coefficients for m in range(s + 1)])
    assert_allclose(states.conj() @ states.T, np.eye(s + 1), atol=1e-14)
    with pytest.raises(RangeError):
        pb_phase_state(7, s)
    with pytest.raises(RangeError):
        pb_phase_element(0, 7, s)


def test_pb_mean_matches_operator(random_state):
    psi = random_state(7)
    c = psi.coefficients
    operator_mean = np.vdot(c, pb_phase_matrix(7).entries @ c).real
    assert pb_distribution(psi).mean() == pytest.approx(operator_mean, abs=1e-12)
    assert pb_distribution(psi).total() == pytest.approx(1.0)


def test_pb_tends_to_gw():
    s = 10_000
    for j, k in [(0, 0), (1, 0), (0, 3), (7, 2), (100, 105)]:
        assert abs(pb_phase_element(j, k, s) - gw_phase_element(j, k)) < 1e-3


def test_pb_variance_of_vacuum_at_large_truncation():
    assert number_state_phase_variance('pb', 0, 10_000) == pytest.approx(np.pi ** 2 / 3, abs=1e-3)


def test_pov_probability_examples():
    assert pov_probability(-1.0, 2.0, number_state(3, 5)) == pytest.approx(3.0 / (2 * np.pi))
    plus = NumberStateVector.from_coefficients([1.0, 1.0], normalize=True)
    assert pov_probability(0.0, np.pi, plus) == pytest.approx(0.5)
    plus_i = NumberStateVector.from_coefficients([1.0, 1.0j], normalize=True)
    assert pov_probability(0.0, np.pi, plus_i) == pytest.approx(0.5 + 1.0 / np.pi)
    assert pov_probability(-np.pi, np.pi, plus_i) == pytest.approx(1.0)


@pytest.mark.parametrize('interval', [(1.0, 0.5), (-4.0, 0.0), (0.0, 4.0)])
def test_pov_probability_rejects_bad_intervals(interval, two_level_state):
    with pytest.raises(DomainError):
        pov_probability(*interval, two_level_state)


def test_pov_density_and_grid(random_state):
    assert_allclose(pov_density(number_state(4, 6), np.linspace(-3, 3, 7)),
                    np.full(7, 1.0 / (2 * np.pi)))
    psi = random_state(10)
    distribution = pov_distribution(psi, grid=64)
    assert distribution.total() == pytest.approx(1.0, abs=1e-10)
    assert distribution.min_value() >= 0.0
    with pytest.raises(ConfigurationError):
        pov_distribution(psi, grid=0)


def test_pov_moments(random_state):
    assert pov_moment(number_state(0, 3), 2) == pytest.approx(np.pi ** 2 / 3)
    assert phase_variance(number_state(2, 4), 'pov') == pytest.approx(np.pi ** 2 / 3)
    psi = random_state(9)
    assert pov_moment(psi, 0) == pytest.approx(1.0)
    c = psi.coefficients
    gw_mean = np.vdot(c, gw_apply(psi)).real
    assert pov_moment(psi, 1) == pytest.approx(gw_mean, abs=1e-12)
    with pytest.raises(ConfigurationError):
        pov_moment(psi, 3)


def test_pov_moments_match_quadrature(random_state, quadrature):
    psi = random_state(6)
    for power, g in [(1, 'identity'), (2, 'square')]:
        numeric = phase_expectation(g, psi, quadrature=quadrature).real
        assert pov_moment(psi, power) == pytest.approx(numeric, abs=1e-11)


def test_phase_expectation_on_number_states():
    vacuum = number_state(0, 3)
    assert phase_expectation('one', vacuum) == pytest.approx(1.0)
    assert phase_expectation('identity', vacuum) == pytest.approx(0.0, abs=1e-13)
    assert phase_expectation('square', vacuum) == pytest.approx(np.pi ** 2 / 3)
    assert phase_expectation('square', vacuum, method='operator') == pytest.approx(np.pi ** 2 / 3)


@pytest.mark.parametrize('g', ['identity', 'square', 'cos', 'sin', lambda phi: phi ** 3])
def test_phase_expectation_paths_agree(g, random_state, quadrature):
    psi = random_state(5)
    pov = phase_expectation(g, psi, method='pov', quadrature=quadrature)
    operator = phase_expectation(g, psi, method='operator')
    assert operator == pytest.approx(pov, abs=1e-10)


def test_phase_expectation_arguments(two_level_state):
    with pytest.raises(ConfigurationError):
        phase_expectation('identity', two_level_state, method='operator', phi0=0.0)
    with pytest.raises(ConfigurationError):
        phase_expectation('identity', two_level_state, method='wigner')
    with pytest.raises(ConfigurationError):
        phase_expectation('tan', two_level_state)
    with pytest.raises(ConfigurationError):
        phase_variance(two_level_state, 'susskind')


def test_spectral_measure_compression(random_state):
    # E([a, b)) of the circle angle pulled back through Phi = -Theta
    a, b = -0.4, 1.9
    s = 5
    d = np.arange(s + 1)[:, None] - np.arange(s + 1)[None, :]
    real, _ = quad_vec(lambda theta: np.cos(d * theta), -b, -a, epsabs=1e-13)
    imag, _ = quad_vec(lambda theta: -np.sin(d * theta), -b, -a, epsabs=1e-13)
    matrix = (real + 1j * imag) / (2 * np.pi)
    psi = random_state(s)
    c = psi.coefficients
    assert np.vdot(c, matrix @ c).real == pytest.approx(pov_probability(a, b, psi), abs=1e-12)


@pytest.mark.slow
def test_pb_limit_matches_pov(random_state):
    for s in range(1, 21):
        psi = random_state(s)
        for g in ('identity', 'square', 'cos'):
            limit = pb_expectation(g, psi)
            pov = phase_expectation(g, psi)
            assert abs(limit - pov) < 1e-4


def test_pb_phase_grid():
    phases = pb_phases(3)
    assert_allclose(phases, [-np.pi, -np.pi / 2, 0.0, np.pi / 2])
