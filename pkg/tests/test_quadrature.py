import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import ConfigurationError, QuadratureError
from src.quadrature import GaussLegendreQuadrature, QuadratureConfig


def test_defaults_match_config(config):
    settings = QuadratureConfig.from_dict(config)
    assert settings == QuadratureConfig()


def test_nodes_cover_interval():
    quadrature = GaussLegendreQuadrature()
    x, w = quadrature.nodes(-np.pi, np.pi, panels=4)
    assert x.size == 4 * 64
    assert np.all((x > -np.pi) & (x < np.pi))
    assert w.sum() == pytest.approx(2.0 * np.pi, abs=1e-13)


def test_trigonometric_integrals():
    quadrature = GaussLegendreQuadrature()
    assert abs(quadrature.integrate(lambda t: np.exp(3j * t), -np.pi, np.pi)) < 1e-13
    assert quadrature.integrate(lambda t: np.cos(t) ** 2, -np.pi, np.pi).real == pytest.approx(np.pi)


def test_integrate_many_shape():
    quadrature = GaussLegendreQuadrature()
    ls = np.arange(-3, 4)
    values = quadrature.periodic_mean(lambda t: np.exp(1j * np.outer(ls, t)))
    assert values.shape == (7,)
    assert_allclose(values, (ls == 0).astype(float), atol=1e-14)


def test_jump_at_period_boundary_is_harmless():
    # Theta * exp(-i Theta) has a jump only at +-pi, which are panel edges
    quadrature = GaussLegendreQuadrature()
    value = quadrature.periodic_mean(lambda t: t * np.exp(-1j * t))
    assert value == pytest.approx(-1j, abs=1e-13)


def test_non_convergence_raises_with_residual():
    config = {'quadrature': {'nodes_per_panel': 2, 'panels': 1, 'max_panels': 2, 'abs_tol': 1e-14}}
    quadrature = GaussLegendreQuadrature(config)
    with pytest.raises(QuadratureError) as info:
        quadrature.integrate(lambda t: np.exp(40j * t), -np.pi, np.pi)
    assert info.value.residual > info.value.tolerance


@pytest.mark.parametrize('section', [
    {'nodes_per_panel': 1},
    {'panels': 0},
    {'panels': 16, 'max_panels': 8},
    {'abs_tol': 0.0},
])
def test_invalid_settings(section):
    with pytest.raises(ConfigurationError):
        QuadratureConfig.from_dict({'quadrature': section})
