import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from src.angle import angle_limit_element, convergence_table
from src.errors import ConfigurationError, DomainError, RangeError
from src.kernel import SYMMETRIC_KERNEL, WEYL_KERNEL, KernelSpec
from src.observable import make_builtin
from src.operators import angular_momentum_matrix, hermiticity_defect, identity_matrix, trace
from src.quantizer import QuantizerConfig, WeylQuantizer

KERNELS = [WEYL_KERNEL, SYMMETRIC_KERNEL]
OBSERVABLES = ['angle', 'angle_squared', 'momentum', 'momentum_angle', 'cos_angle']

# Violates K(sigma, 0) = 1
SIGMA_SQUARED_KERNEL = KernelSpec(name='sigma_squared',
                                  evaluate=lambda sigma, lam: 1.0 + 0.5 * sigma ** 2 + 0.0 * lam)


def test_config_validation(config):
    assert QuantizerConfig.from_dict(config, N=4).N == 4
    with pytest.raises(ConfigurationError):
        QuantizerConfig.from_dict(config, N=-1)
    with pytest.raises(ConfigurationError):
        QuantizerConfig.from_dict(config, N=2, hbar=0.0)


def test_restricted_u(make_quantizer):
    q = make_quantizer(1)
    assert_allclose(q.restricted_u(np.pi, 0).entries, np.diag([-1, 1, -1]), atol=1e-15)
    assert make_quantizer(2).restricted_u(0.0, 0).max_abs_diff(identity_matrix(-2, 2)) == 0.0
    shifted = q.restricted_u(0.5, 1)
    assert shifted[0, -1] == pytest.approx(np.exp(-0.25j))
    assert shifted[1, 0] == pytest.approx(np.exp(0.25j))
    with pytest.raises(RangeError):
        q.restricted_u(0.0, 2)


def test_symmetric_quantizer_example(make_quantizer):
    omega = make_quantizer(1).restricted_quantizer(SYMMETRIC_KERNEL, 0.0, 0)
    expected = [[0.0, 0.5, 0.0],
                [0.5, 1.0, 0.5],
                [0.0, 0.5, 0.0]]
    assert_allclose(omega.entries, expected, atol=1e-15)


def test_weyl_quantizer_entries(make_quantizer):
    omega = make_quantizer(1).restricted_quantizer(WEYL_KERNEL, 0.0, 0)
    assert omega[1, -1] == pytest.approx(1.0)
    assert omega[1, 0] == pytest.approx(2.0 / np.pi)


def test_quantizer_argument_checks(make_quantizer):
    q = make_quantizer(1)
    with pytest.raises(DomainError):
        q.restricted_quantizer(WEYL_KERNEL, np.pi, 0)
    with pytest.raises(RangeError):
        q.restricted_quantizer(WEYL_KERNEL, 0.0, 2)


@pytest.mark.parametrize('kernel', KERNELS)
def test_structure_over_truncations(kernel, make_quantizer, rng):
    for N in range(1, 17):
        q = make_quantizer(N)
        theta = rng.uniform(-np.pi, np.pi)
        n = int(rng.integers(-N, N + 1))
        omega = q.restricted_quantizer(kernel, theta, n)
        assert hermiticity_defect(omega) < 1e-12
        assert trace(omega) == pytest.approx(1.0, abs=1e-12)
        assert q.resolution_of_identity_defect(kernel) < 1e-10


def test_resolution_of_identity_fails_for_bad_kernel(make_quantizer):
    assert make_quantizer(3).resolution_of_identity_defect(SIGMA_SQUARED_KERNEL) > 0.1


@settings(max_examples=25, deadline=None)
@given(theta=st.floats(min_value=-np.pi, max_value=3.14159, allow_nan=False),
       n=st.integers(min_value=-4, max_value=4))
def test_quantizer_is_hermitian_with_unit_trace(theta, n):
    omega = WeylQuantizer(N=4).restricted_quantizer(SYMMETRIC_KERNEL, theta, n)
    assert hermiticity_defect(omega) < 1e-12
    assert abs(trace(omega) - 1.0) < 1e-12


@pytest.mark.parametrize('kernel', KERNELS)
def test_quantizer_from_u_agrees_on_inner_band(kernel, make_quantizer):
    q = make_quantizer(3)
    direct = q.restricted_quantizer(kernel, 0.7, -1).entries
    from_u = q.restricted_quantizer_from_u(kernel, 0.7, -1).entries
    js = np.arange(-3, 4)
    band = np.abs(js[:, None] - js[None, :]) <= 3
    assert_allclose(from_u[band], direct[band], atol=1e-12)
    assert np.all(from_u[~band] == 0)


@pytest.mark.parametrize('kernel', KERNELS)
def test_projection_consistency(kernel, make_quantizer):
    q = make_quantizer(4)
    assert q.projection_defect(kernel, -1.2, 1, N_sub=2) == 0.0
    with pytest.raises(RangeError):
        q.projection_defect(kernel, 0.0, 0, N_sub=5)


@pytest.mark.parametrize('name', OBSERVABLES)
@pytest.mark.parametrize('N', [1, 4, 16])
def test_closed_forms_match_moment_sum(name, N, make_quantizer):
    q = make_quantizer(N, hbar=0.5)
    f = make_builtin(name)
    assert q.weyl_apply_closed_weyl(f).max_abs_diff(q.weyl_apply(f, WEYL_KERNEL)) < 1e-12
    assert q.weyl_apply_closed_symmetric(f).max_abs_diff(
        q.weyl_apply(f, SYMMETRIC_KERNEL)) < 1e-12


@pytest.mark.parametrize('kernel', KERNELS)
@pytest.mark.parametrize('name', ['angle', 'momentum_angle'])
def test_triple_sum_matches_moment_sum(kernel, name, make_quantizer):
    q = make_quantizer(3)
    f = make_builtin(name)
    assert q.weyl_apply_triple_sum(f, kernel).max_abs_diff(q.weyl_apply(f, kernel)) < 1e-11


@pytest.mark.parametrize('kernel', KERNELS)
def test_basic_quantizations(kernel, make_quantizer):
    q = make_quantizer(5, hbar=0.5)
    unity = q.weyl_apply(make_builtin('unity'), kernel)
    assert unity.max_abs_diff(identity_matrix(-5, 5)) < 1e-14
    momentum = q.weyl_apply(make_builtin('momentum'), kernel)
    assert momentum.max_abs_diff(angular_momentum_matrix(5, hbar=0.5)) < 1e-14
    angle = q.weyl_apply(make_builtin('angle'), kernel)
    assert hermiticity_defect(angle) < 1e-14


def test_symmetric_ordering_of_momentum_angle(make_quantizer):
    q = make_quantizer(6)
    L = angular_momentum_matrix(6)
    angle = q.weyl_apply(make_builtin('angle'), SYMMETRIC_KERNEL)
    product = q.weyl_apply(make_builtin('momentum_angle'), SYMMETRIC_KERNEL)
    assert product.max_abs_diff(0.5 * (L @ angle + angle @ L)) < 1e-13


def test_weyl_ordering_of_momentum_angle_on_even_entries(make_quantizer):
    q = make_quantizer(6)
    L = angular_momentum_matrix(6)
    angle = q.weyl_apply(make_builtin('angle'), WEYL_KERNEL)
    product = q.weyl_apply(make_builtin('momentum_angle'), WEYL_KERNEL)
    symmetrized = 0.5 * (L @ angle + angle @ L)
    js = np.arange(-6, 7)
    even = (js[:, None] + js[None, :]) % 2 == 0
    assert_allclose(product.entries[even], symmetrized.entries[even], atol=1e-13)


@pytest.mark.parametrize('kernel', KERNELS)
@pytest.mark.parametrize('name', ['angle_squared', 'momentum_angle', 'cos_angle'])
def test_trace_identity(kernel, name, make_quantizer):
    assert make_quantizer(6).trace_identity_defect(make_builtin(name), kernel) < 1e-8


def test_moment_table_is_cached(make_quantizer):
    q = make_quantizer(2)
    table = q.moment_table(WEYL_KERNEL)
    assert table.shape == (9, 17)
    assert q.moment_table(WEYL_KERNEL) is table
    assert table[2 + 4, 1 + 8] == pytest.approx(2.0 / np.pi)


@pytest.mark.parametrize('kernel', KERNELS)
@pytest.mark.parametrize('name', OBSERVABLES)
def test_single_element_matches_full_matrix(kernel, name, make_quantizer):
    q = make_quantizer(3, hbar=0.5)
    f = make_builtin(name)
    full = q.weyl_apply(f, kernel)
    for j, k in [(0, 0), (1, 0), (-2, 3), (3, -3), (2, 1)]:
        assert q.weyl_element(f, kernel, j, k) == pytest.approx(full[j, k], abs=1e-13)
    with pytest.raises(RangeError):
        q.weyl_element(f, kernel, 4, 0)


def test_angle_ladder_matches_convergence_table(make_quantizer):
    ladder = [2, 8, 32]
    entries = [(1, 0), (2, 0)]
    table = make_quantizer(ladder[0]).element_ladder(make_builtin('angle'), WEYL_KERNEL,
                                                     entries, ladder)
    reference = convergence_table(WEYL_KERNEL, entries, ladder)
    assert list(table.columns) == ['N', 'j', 'k', 're', 'im', 'change']
    assert_allclose(table['re'].to_numpy(), reference['re'].to_numpy(), atol=1e-12)
    assert_allclose(table['im'].to_numpy(), reference['im'].to_numpy(), atol=1e-12)

    first = table.groupby(['j', 'k'])['change'].first()
    assert first.isna().all()
    steps = table[table['j'] == 1]['change'].to_numpy()[1:]
    assert steps[1] < steps[0]


def test_symmetric_ladder_sits_on_the_limit(make_quantizer):
    table = make_quantizer(1).element_ladder(make_builtin('angle'), SYMMETRIC_KERNEL,
                                             [(1, 0), (3, -2)], [1, 4, 16])
    # (3, -2) is outside [-1, 1] at the first step
    assert len(table) == 5
    for row in table.itertuples():
        assert complex(row.re, row.im) == pytest.approx(angle_limit_element(row.j, row.k),
                                                        abs=1e-13)
    assert table['change'].dropna().max() < 1e-13


def test_element_ladder_rejects_unordered_truncations(make_quantizer):
    with pytest.raises(ConfigurationError):
        make_quantizer(2).element_ladder(make_builtin('angle'), WEYL_KERNEL, [(1, 0)], [8, 2])
