"""
Ordering Kernel Module
Ordering kernels K(sigma, lambda) and their structural conditions

BUILT-IN KERNELS:
- weyl:      K = 1               (Weyl ordering)
- symmetric: K = cos(sigma*lambda/2) (symmetric ordering)

CONDITIONS CHECKED BY validate_kernel:
- reality:          K*(-sigma, -l) = K(sigma, l)   (quantized real f is Hermitian)
- theta_only:       K(0, l) = 1                    (f(Theta) -> f(Theta^))
- momentum_only:    K(sigma, 0) = 1                (f(L) -> f(L^), unit trace)
- product form:     K(0) = 1 and K real, K(sigma, l) = K(sigma/2, 2l)

MOMENT:
  kernel_moment(K, l, m) = (1/2pi) int_{-pi}^{pi} K(sigma, l) exp(i sigma m) d sigma
  with m = (j + k)/2 - n an integer or half-integer.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from .errors import ConfigurationError, DomainError
from .quadrature import GaussLegendreQuadrature

# Angles within this distance of +-pi count as inside the domain
ANGLE_EPS = 1e-12

ArrayFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KernelSpec:
    """
    Ordering kernel K(sigma, lambda)

    Attributes:
        name: Identifier
        evaluate: Vectorised function (sigma, lambda) -> complex array
        is_product_form: K depends only on sigma * lambda
        moment: Optional closed form (l, m) -> moment, vectorised
    """
    name: str
    evaluate: ArrayFunc
    is_product_form: bool = False
    moment: Optional[ArrayFunc] = field(default=None, compare=False)

    def __call__(self, sigma, lam) -> np.ndarray:
        sigma = np.asarray(sigma, dtype=float)
        lam = np.asarray(lam, dtype=float)
        values = np.asarray(self.evaluate(sigma, lam), dtype=complex)
        return np.broadcast_to(values, np.broadcast(sigma, lam).shape)

    @property
    def has_analytic_moment(self) -> bool:
        return self.moment is not None


def _weyl_evaluate(sigma: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return np.ones(np.broadcast(sigma, lam).shape, dtype=complex)


def _weyl_moment(l: np.ndarray, m: np.ndarray) -> np.ndarray:
    # (1/2pi) int exp(i sigma m) = sin(pi m) / (pi m)
    return np.sinc(np.asarray(m, dtype=float) + 0.0 * np.asarray(l, dtype=float)).astype(complex)


def _symmetric_evaluate(sigma: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return np.cos(0.5 * sigma * lam).astype(complex)


def _symmetric_moment(l: np.ndarray, m: np.ndarray) -> np.ndarray:
    l = np.asarray(l, dtype=float)
    m = np.asarray(m, dtype=float)
    return (0.5 * (np.sinc(m + 0.5 * l) + np.sinc(m - 0.5 * l))).astype(complex)


WEYL_KERNEL = KernelSpec(
    name='weyl',
    evaluate=_weyl_evaluate,
    is_product_form=True,
    moment=_weyl_moment,
)

SYMMETRIC_KERNEL = KernelSpec(
    name='symmetric',
    evaluate=_symmetric_evaluate,
    is_product_form=True,
    moment=_symmetric_moment,
)

BUILTIN_KERNELS: Dict[str, KernelSpec] = {
    WEYL_KERNEL.name: WEYL_KERNEL,
    SYMMETRIC_KERNEL.name: SYMMETRIC_KERNEL,
}


def get_kernel(name: str) -> KernelSpec:
    """
    Look up a built-in kernel by name

    Args:
        name: 'weyl' or 'symmetric'

    Returns:
        KernelSpec
    """
    try:
        return BUILTIN_KERNELS[name.lower()]
    except KeyError:
        raise ConfigurationError(
            f"Unknown kernel: {name!r} (available: {sorted(BUILTIN_KERNELS)})") from None


def product_kernel(name: str, func: Callable[[np.ndarray], np.ndarray]) -> KernelSpec:
    """
    Build a kernel of product form K(sigma * lambda)

    Args:
        name: Identifier
        func: Vectorised function of the product sigma * lambda

    Returns:
        KernelSpec with is_product_form=True and no closed-form moment
    """
    return KernelSpec(name=name, evaluate=lambda sigma, lam: func(sigma * lam),
                      is_product_form=True)


def eval_kernel(kernel: KernelSpec, sigma: float, lam: float) -> complex:
    """
    Evaluate K(sigma, lambda) at a point

    Args:
        kernel: Ordering kernel
        sigma: Angle in [-pi, pi]
        lam: Real argument

    Returns:
        Kernel value
    """
    if not -np.pi - ANGLE_EPS <= sigma <= np.pi + ANGLE_EPS:
        raise DomainError(f"sigma={sigma} outside [-pi, pi]")
    return complex(kernel(sigma, lam))


def kernel_moments(kernel: KernelSpec,
                   ls: np.ndarray,
                   ms: np.ndarray,
                   quadrature: Optional[GaussLegendreQuadrature] = None,
                   use_analytic: bool = True) -> np.ndarray:
    """
    Table of kernel moments for all pairs (l, m)

    Args:
        kernel: Ordering kernel
        ls: Integer momentum transfers l
        ms: Integer or half-integer frequencies m
        quadrature: Integrator for kernels without closed form
        use_analytic: Use the closed form when the kernel has one

    Returns:
        Complex array of shape (len(ls), len(ms))
    """
    ls = np.atleast_1d(np.asarray(ls, dtype=float))
    ms = np.atleast_1d(np.asarray(ms, dtype=float))

    if use_analytic and kernel.has_analytic_moment:
        return np.asarray(kernel.moment(ls[:, None], ms[None, :]), dtype=complex)

    quadrature = quadrature or GaussLegendreQuadrature()
    table = np.empty((ls.size, ms.size), dtype=complex)
    for row, l in enumerate(ls):
        def integrand(sigma: np.ndarray, l=l) -> np.ndarray:
            return kernel(sigma, l)[None, :] * np.exp(1j * ms[:, None] * sigma[None, :])
        table[row] = quadrature.periodic_mean(integrand)
    return table


def kernel_moment(kernel: KernelSpec,
                  l: int,
                  m: float,
                  quadrature: Optional[GaussLegendreQuadrature] = None,
                  use_analytic: bool = True) -> complex:
    """
    (1/2pi) int_{-pi}^{pi} K(sigma, l) exp(i sigma m) d sigma

    Args:
        kernel: Ordering kernel
        l: Integer momentum transfer
        m: Integer or half-integer frequency
        quadrature: Integrator for kernels without closed form
        use_analytic: Use the closed form when the kernel has one

    Returns:
        Moment value
    """
    return complex(kernel_moments(kernel, [l], [m], quadrature, use_analytic)[0, 0])


@dataclass(frozen=True)
class KernelGrid:
    """Sampling grid for kernel validation: sigma in [-pi, pi], integer lambda"""
    n_sigma: int = 129
    l_max: int = 10

    def sigmas(self) -> np.ndarray:
        # Symmetric grid so that -sigma is a grid point
        return np.linspace(-np.pi, np.pi, self.n_sigma)

    def lambdas(self) -> np.ndarray:
        return np.arange(-self.l_max, self.l_max + 1, dtype=float)


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one structural condition"""
    name: str
    passed: bool
    max_deviation: float


@dataclass
class KernelValidationReport:
    """Per-condition pass/fail and maximum deviation"""
    kernel_name: str
    tolerance: float
    conditions: List[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {'kernel': self.kernel_name, 'condition': c.name,
             'passed': c.passed, 'max_deviation': c.max_deviation}
            for c in self.conditions
        ])


def validate_kernel(kernel: KernelSpec,
                    grid: Optional[KernelGrid] = None,
                    tol: float = 1e-12,
                    logger: Optional[logging.Logger] = None) -> KernelValidationReport:
    """
    Check the structural conditions an ordering kernel should satisfy

    Failures are recorded in the report, never raised.

    Args:
        kernel: Ordering kernel
        grid: Sampling grid
        tol: Maximum allowed deviation
        logger: Logger instance

    Returns:
        KernelValidationReport
    """
    logger = logger or logging.getLogger(__name__)
    grid = grid or KernelGrid()
    if grid.n_sigma < 1 or grid.l_max < 0:
        raise ConfigurationError("Kernel validation grid must be non-empty")

    sigma = grid.sigmas()[:, None]
    lam = grid.lambdas()[None, :]
    values = kernel(sigma, lam)

    deviations = {
        'finite': 0.0 if np.all(np.isfinite(values)) else np.inf,
        'reality': np.max(np.abs(np.conj(kernel(-sigma, -lam)) - values)),
        'theta_only': np.max(np.abs(kernel(0.0, lam) - 1.0)),
        'momentum_only': np.max(np.abs(kernel(sigma, 0.0) - 1.0)),
    }

    if kernel.is_product_form:
        deviations['product_normalization'] = float(np.abs(kernel(0.0, 0.0) - 1.0))
        deviations['product_realness'] = np.max(np.abs(values.imag))
        deviations['product_consistency'] = np.max(np.abs(kernel(sigma / 2.0, 2.0 * lam) - values))

    report = KernelValidationReport(kernel_name=kernel.name, tolerance=tol)
    for name, deviation in deviations.items():
        deviation = float(deviation)
        passed = bool(deviation <= tol)
        report.conditions.append(ConditionResult(name, passed, deviation))
        if not passed:
            logger.warning(f"Kernel {kernel.name}: condition {name} fails "
                           f"(max deviation {deviation:.3e})")

    return report
