import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from src.errors import ConfigurationError, SamplingError
from src.operators import StateVector, basis_state
from src.phase import NumberStateVector, number_state
from src.uncertainty import (UncertaintyReport, angle_mean, boundary_amplitude,
                             check_theta_l_uncertainty, circle_dispersions,
                             conjecture_phase_number_experiment, count_violations,
                             random_number_states, run_circle_batch, run_conjecture_batch,
                             sample_centered_states)

TWO_LEVEL_SPREAD = np.sqrt(np.pi ** 2 / 3 - 2.0)


@pytest.fixture
def two_level_circle_state():
    return StateVector.from_coefficients([1.0, 1.0], lo=0).normalized()


def test_vacuum_dispersions():
    mean, delta_angle, delta_momentum = circle_dispersions(basis_state(0, -3, 3), 3)
    assert mean == pytest.approx(0.0, abs=1e-15)
    assert delta_angle == pytest.approx(np.pi / np.sqrt(3))
    assert delta_momentum == 0.0


def test_two_level_state(two_level_circle_state):
    report = check_theta_l_uncertainty(two_level_circle_state, N=4)
    assert report.applicable
    assert report.delta_angle == pytest.approx(TWO_LEVEL_SPREAD)
    assert report.delta_momentum == pytest.approx(0.5)
    assert report.lhs == pytest.approx(0.567862, abs=1e-6)
    assert report.rhs == pytest.approx(0.5)
    assert report.satisfied


def test_vacuum_saturates_bound():
    report = check_theta_l_uncertainty(basis_state(0, -2, 2), N=2)
    assert report.boundary_probability == pytest.approx(1.0 / (2 * np.pi))
    assert report.rhs == pytest.approx(0.0, abs=1e-15)
    assert report.satisfied


def test_unnormalized_state_is_rejected(two_level_circle_state):
    scaled = StateVector(lo=0, hi=1, coefficients=2.0 * two_level_circle_state.coefficients)
    with pytest.raises(ConfigurationError):
        check_theta_l_uncertainty(scaled, N=4)
    with pytest.raises(ConfigurationError):
        run_circle_batch([two_level_circle_state, scaled], N=4)


def test_boundary_amplitude():
    assert boundary_amplitude(basis_state(3, -3, 3)) == pytest.approx(-1.0 / np.sqrt(2 * np.pi))
    psi = StateVector.from_coefficients([1.0, 1.0], lo=-1).normalized()
    assert boundary_amplitude(psi) == pytest.approx(0.0, abs=1e-15)


def test_dispersions_match_quadrature(rng, quadrature):
    N = 20
    c = rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
    psi = StateVector(lo=-N, hi=N, coefficients=c).normalized()
    ks = np.arange(-N, N + 1)

    def density(theta):
        wave = np.exp(1j * np.outer(theta, ks)) @ psi.coefficients
        return np.abs(wave) ** 2 / (2 * np.pi)

    first = quadrature.integrate(lambda t: t * density(t), -np.pi, np.pi).real
    second = quadrature.integrate(lambda t: t ** 2 * density(t), -np.pi, np.pi).real
    mean, delta_angle, _ = circle_dispersions(psi, N)
    assert mean == pytest.approx(first, abs=1e-8)
    assert delta_angle == pytest.approx(np.sqrt(second - first ** 2), abs=1e-8)
    assert angle_mean(psi, N) == pytest.approx(first, abs=1e-8)


def test_off_centre_state_is_not_applicable():
    psi = StateVector.from_coefficients([1.0, 1.0j], lo=0).normalized()
    report = check_theta_l_uncertainty(psi, N=2)
    assert report.mean_angle == pytest.approx(-1.0)
    assert not report.applicable
    assert report.satisfied is None
    assert report.mode == 'circle'


def test_sampled_states_are_centred(rng):
    states = sample_centered_states(40, 6, rng)
    assert len(states) == 40
    for psi in states:
        assert psi.is_normalized()
        assert abs(angle_mean(psi, 6)) <= 1e-8


def test_sampling_gives_up(rng):
    with pytest.raises(SamplingError):
        sample_centered_states(3, 4, rng, centering_tol=-1.0, max_attempts=10)


def test_circle_batch_has_no_violations(monkeypatch):
    monkeypatch.setenv('CYLQUANT_NUM_THREADS', '2')
    states = sample_centered_states(100, 8, np.random.default_rng(3))
    frame = run_circle_batch(states, 8)
    assert len(frame) == 100
    assert frame['applicable'].all()
    assert count_violations(frame) == 0
    assert set(frame.columns) >= {'lhs', 'rhs', 'satisfied', 'boundary_probability'}


@pytest.mark.slow
def test_large_circle_batch_has_no_violations():
    states = sample_centered_states(1000, 32, np.random.default_rng(2024))
    assert count_violations(run_circle_batch(states, 32)) == 0


def test_conjecture_on_number_state(caplog):
    caplog.set_level('INFO')
    report = conjecture_phase_number_experiment(number_state(2, 4))
    assert isinstance(report, UncertaintyReport)
    assert report.conjecture
    assert report.delta_momentum == 0.0
    assert report.rhs == pytest.approx(0.0)
    assert report.satisfied
    assert 'Phase/number relation' in caplog.text


def test_conjecture_on_two_level_state(two_level_state):
    report = conjecture_phase_number_experiment(two_level_state)
    assert report.delta_momentum == pytest.approx(0.5)
    assert report.boundary_probability == pytest.approx(0.0, abs=1e-15)
    assert report.rhs == pytest.approx(0.5)
    assert report.delta_angle == pytest.approx(TWO_LEVEL_SPREAD)
    assert report.satisfied == (report.lhs >= report.rhs)


def test_conjecture_batch_is_deterministic():
    first = run_conjecture_batch(random_number_states(30, 6, np.random.default_rng(11)))
    second = run_conjecture_batch(random_number_states(30, 6, np.random.default_rng(11)))
    pd.testing.assert_frame_equal(first, second)
    assert first['conjecture'].all()
    assert 0 <= count_violations(first) <= 30


def test_random_number_states(rng):
    states = random_number_states(5, 3, rng)
    assert all(isinstance(psi, NumberStateVector) and psi.s == 3 for psi in states)
    assert_allclose([np.sum(psi.probabilities) for psi in states], 1.0)


def test_count_violations_on_empty_frame():
    assert count_violations(pd.DataFrame()) == 0


def test_unknown_state_family(rng):
    from src.uncertainty import _candidate_state

    with pytest.raises(ConfigurationError):
        _candidate_state(rng, 3, 'coherent')
