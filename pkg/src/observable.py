"""
Classical Observable Module
Functions f(Theta, L) on the cylinder S^1 x R^1 and their angular
Fourier coefficients at quantized momenta L = n*hbar

  c(l, n) = (1/2pi) int_{-pi}^{pi} f(Theta, n*hbar) exp(-i l Theta) dTheta

Built-ins carry closed-form coefficients; any other observable is
integrated with the composite Gauss-Legendre rule.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from .errors import ConfigurationError
from .quadrature import GaussLegendreQuadrature

ArrayFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]
CoefficientFunc = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class ClassicalObservable:
    """
    Classical observable f(Theta, L)

    Attributes:
        name: Identifier
        evaluate: Vectorised function (Theta, L) -> values
        theta_only: f depends on Theta only
        l_only: f depends on L only
        is_real: f is real-valued
        coefficient: Optional closed form (ls, L) -> Fourier coefficients
    """
    name: str
    evaluate: ArrayFunc
    theta_only: bool = False
    l_only: bool = False
    is_real: bool = True
    coefficient: Optional[CoefficientFunc] = field(default=None, compare=False)

    def __call__(self, theta, L) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        L = np.asarray(L, dtype=float)
        values = np.asarray(self.evaluate(theta, L), dtype=complex)
        return np.broadcast_to(values, np.broadcast(theta, L).shape)

    @property
    def has_analytic_coefficients(self) -> bool:
        return self.coefficient is not None


def _parity(ls: np.ndarray) -> np.ndarray:
    return np.where(ls % 2 == 0, 1.0, -1.0)


def _delta(ls: np.ndarray) -> np.ndarray:
    return (ls == 0).astype(complex)


def angle_coefficients(ls: np.ndarray) -> np.ndarray:
    """Fourier coefficients of Theta: i(-1)^l / l, zero at l = 0"""
    ls = np.asarray(ls, dtype=np.int64)
    safe = np.where(ls == 0, 1, ls)
    return np.where(ls == 0, 0.0, 1j * _parity(ls) / safe)


def angle_squared_coefficients(ls: np.ndarray) -> np.ndarray:
    """Fourier coefficients of Theta^2: pi^2/3 at l = 0, else 2(-1)^l / l^2"""
    ls = np.asarray(ls, dtype=np.int64)
    safe = np.where(ls == 0, 1, ls).astype(float)
    return np.where(ls == 0, np.pi ** 2 / 3.0, 2.0 * _parity(ls) / safe ** 2).astype(complex)


def _cos_coefficients(ls: np.ndarray) -> np.ndarray:
    ls = np.asarray(ls, dtype=np.int64)
    return 0.5 * ((ls == 1) | (ls == -1)).astype(complex)


def _sin_coefficients(ls: np.ndarray) -> np.ndarray:
    # sin = (e^{i Theta} - e^{-i Theta}) / 2i
    ls = np.asarray(ls, dtype=np.int64)
    return -0.5j * (ls == 1) + 0.5j * (ls == -1)


def _zeros_like(theta: np.ndarray, L: np.ndarray) -> np.ndarray:
    return np.zeros(np.broadcast(theta, L).shape, dtype=complex)


# Named phase functions g(Phi) with the coefficients of g(-Theta)
_PULLBACK_FUNCTIONS: Dict[str, Any] = {
    'one': (np.ones_like, lambda ls: _delta(np.asarray(ls))),
    'identity': (lambda phi: phi, lambda ls: -angle_coefficients(ls)),
    'square': (lambda phi: phi ** 2, angle_squared_coefficients),
    'cos': (np.cos, _cos_coefficients),
    'sin': (np.sin, lambda ls: -_sin_coefficients(ls)),
}


def _phase_pullback(g: Union[str, Callable[[np.ndarray], np.ndarray]],
                    is_real: bool = True) -> ClassicalObservable:
    if isinstance(g, str):
        if g not in _PULLBACK_FUNCTIONS:
            raise ConfigurationError(
                f"Unknown phase function: {g!r} (available: {sorted(_PULLBACK_FUNCTIONS)})")
        func, coefficients = _PULLBACK_FUNCTIONS[g]
        return ClassicalObservable(
            name=f"phase_pullback[{g}]",
            evaluate=lambda theta, L: func(-theta) + 0.0 * L,
            theta_only=True,
            is_real=True,
            coefficient=lambda ls, L: coefficients(ls),
        )

    if not callable(g):
        raise ConfigurationError("phase_pullback needs a phase function g")

    return ClassicalObservable(
        name=f"phase_pullback[{getattr(g, '__name__', 'g')}]",
        evaluate=lambda theta, L: np.asarray(g(-theta), dtype=complex) + 0.0 * L,
        theta_only=True,
        is_real=is_real,
    )


def make_builtin(name: str, **params) -> ClassicalObservable:
    """
    Construct a built-in observable

    Args:
        name: angle, momentum, angle_squared, unity, phase_pullback, cos_angle,
            sin_angle, momentum_angle, momentum_power
        **params: power (momentum_power), g and is_real (phase_pullback)

    Returns:
        ClassicalObservable with metadata flags set
    """
    if name == 'angle':
        return ClassicalObservable(
            name='angle',
            evaluate=lambda theta, L: theta + 0.0 * L,
            theta_only=True,
            coefficient=lambda ls, L: angle_coefficients(ls),
        )
    if name == 'angle_squared':
        return ClassicalObservable(
            name='angle_squared',
            evaluate=lambda theta, L: theta ** 2 + 0.0 * L,
            theta_only=True,
            coefficient=lambda ls, L: angle_squared_coefficients(ls),
        )
    if name == 'momentum':
        return ClassicalObservable(
            name='momentum',
            evaluate=lambda theta, L: L + 0.0 * theta,
            l_only=True,
            coefficient=lambda ls, L: L * _delta(np.asarray(ls)),
        )
    if name == 'momentum_power':
        power = int(params.get('power', 1))
        if power < 0:
            raise ConfigurationError("momentum_power needs power >= 0")
        return ClassicalObservable(
            name=f"momentum_power[{power}]",
            evaluate=lambda theta, L: L ** power + 0.0 * theta,
            l_only=True,
            coefficient=lambda ls, L: (L ** power) * _delta(np.asarray(ls)),
        )
    if name == 'momentum_angle':
        return ClassicalObservable(
            name='momentum_angle',
            evaluate=lambda theta, L: L * theta,
            coefficient=lambda ls, L: L * angle_coefficients(ls),
        )
    if name == 'unity':
        return ClassicalObservable(
            name='unity',
            evaluate=lambda theta, L: 1.0 + _zeros_like(theta, L),
            theta_only=True,
            l_only=True,
            coefficient=lambda ls, L: _delta(np.asarray(ls)),
        )
    if name == 'cos_angle':
        return ClassicalObservable(
            name='cos_angle',
            evaluate=lambda theta, L: np.cos(theta) + 0.0 * L,
            theta_only=True,
            coefficient=lambda ls, L: _cos_coefficients(ls),
        )
    if name == 'sin_angle':
        return ClassicalObservable(
            name='sin_angle',
            evaluate=lambda theta, L: np.sin(theta) + 0.0 * L,
            theta_only=True,
            coefficient=lambda ls, L: _sin_coefficients(ls),
        )
    if name == 'phase_pullback':
        if 'g' not in params:
            raise ConfigurationError("phase_pullback needs parameter g")
        return _phase_pullback(params['g'], is_real=params.get('is_real', True))

    raise ConfigurationError(f"Unknown observable: {name!r}")


def fourier_coefficients(f: ClassicalObservable,
                         ls: np.ndarray,
                         n: int,
                         hbar: float = 1.0,
                         quadrature: Optional[GaussLegendreQuadrature] = None,
                         use_analytic: bool = True) -> np.ndarray:
    """
    Angular Fourier coefficients of f at momentum L = n*hbar

    Args:
        f: Classical observable
        ls: Integer frequencies l
        n: Momentum quantum number
        hbar: Reduced Planck constant
        quadrature: Integrator for observables without closed form
        use_analytic: Use the closed form when available

    Returns:
        Complex array of shape (len(ls),)
    """
    ls = np.atleast_1d(np.asarray(ls, dtype=np.int64))
    L = n * hbar

    if use_analytic and f.has_analytic_coefficients:
        return np.asarray(f.coefficient(ls, L), dtype=complex) * np.ones(ls.shape)

    quadrature = quadrature or GaussLegendreQuadrature()

    def integrand(theta: np.ndarray) -> np.ndarray:
        return f(theta, L)[None, :] * np.exp(-1j * ls[:, None] * theta[None, :])

    return quadrature.periodic_mean(integrand)


def fourier_coefficient(f: ClassicalObservable,
                        l: int,
                        n: int,
                        hbar: float = 1.0,
                        quadrature: Optional[GaussLegendreQuadrature] = None,
                        use_analytic: bool = True) -> complex:
    """
    (1/2pi) int f(Theta, n*hbar) exp(-i l Theta) dTheta

    Args:
        f: Classical observable
        l: Integer frequency
        n: Momentum quantum number
        hbar: Reduced Planck constant
        quadrature: Integrator for observables without closed form
        use_analytic: Use the closed form when available

    Returns:
        Fourier coefficient
    """
    return complex(fourier_coefficients(f, [l], n, hbar, quadrature, use_analytic)[0])
