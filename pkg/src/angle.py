"""
Angle Operator Module
Restricted angle operators Theta_N[K], their kernel-independent limit and
convergence diagnostics

LIMIT (any admissible kernel):
  <j|Theta|k> = i(-1)^(j-k) / (j-k) for j != k, 0 on the diagonal

FINITE N:
- symmetric: equals the limit at every N
- weyl:      even j+k -> i / (j-k); odd j+k -> limit * (2/pi) S(j+k, N),
             S(p, N) = sum_n (-1)^((p-1)/2 - n) / (p - 2n)
- any K:     limit * int K(sigma, j-k) D_N(sigma) exp(i sigma (j+k)/2) dsigma/2pi
             with the Dirichlet kernel D_N(sigma) = sin[sigma(N+1/2)] / sin(sigma/2)

The limit column norm ||Theta_N|0>||^2 = 2 sum_{j<=N} 1/j^2 tends to pi^2/3.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .errors import RangeError
from .kernel import SYMMETRIC_KERNEL, WEYL_KERNEL, KernelSpec
from .observable import angle_coefficients, angle_squared_coefficients, make_builtin
from .operators import ComplexMatrix, spectral_norm_estimate
from .quadrature import GaussLegendreQuadrature
from .quantizer import WeylQuantizer

REFERENCE_COLUMN_NORM = np.pi / np.sqrt(3.0)
REFERENCE_OPERATOR_NORM = np.pi

DEFAULT_LADDER = (2, 8, 32, 128, 512)


def _toeplitz_over_range(symbol: np.ndarray, N: int) -> np.ndarray:
    """Dense matrix t(j - k) over [-N, N] from symbol values t(d), d in [-2N, 2N]"""
    js = np.arange(-N, N + 1)
    return symbol[(js[:, None] - js[None, :]) + 2 * N]


def angle_limit_element(j: int, k: int) -> complex:
    """i(-1)^(j-k)/(j-k) off the diagonal, 0 on it"""
    return complex(angle_coefficients(np.array([j - k]))[0])


def angle_limit_matrix(N: int) -> ComplexMatrix:
    """Limit angle operator truncated to [-N, N]"""
    symbol = angle_coefficients(np.arange(-2 * N, 2 * N + 1))
    return ComplexMatrix(lo=-N, hi=N, entries=_toeplitz_over_range(symbol, N))


def angle_squared_matrix(N: int) -> ComplexMatrix:
    """Theta^2 from its own Fourier entries: pi^2/3 diagonal, 2(-1)^(j-k)/(j-k)^2 off it"""
    symbol = angle_squared_coefficients(np.arange(-2 * N, 2 * N + 1))
    return ComplexMatrix(lo=-N, hi=N, entries=_toeplitz_over_range(symbol, N))


def dirichlet_kernel(sigma, N: int) -> np.ndarray:
    """
    sin[sigma (N + 1/2)] / sin(sigma / 2), equal to 2N + 1 at sigma = 0

    Args:
        sigma: Angle(s) in [-pi, pi]
        N: Truncation

    Returns:
        Real value(s), scalar input gives a 0-d array
    """
    sigma = np.asarray(sigma, dtype=float)
    denominator = np.sin(0.5 * sigma)
    at_zero = denominator == 0.0
    safe = np.where(at_zero, 1.0, denominator)
    return np.where(at_zero, 2.0 * N + 1.0, np.sin(sigma * (N + 0.5)) / safe)


def weyl_odd_factor(p: np.ndarray, N: int) -> np.ndarray:
    """
    (2/pi) S(p, N) for odd p, the Weyl-ordering correction of odd j+k entries
    """
    p = np.atleast_1d(np.asarray(p, dtype=np.int64))
    ns = np.arange(-N, N + 1)
    exponent = (p[:, None] - 1) // 2 - ns[None, :]
    signs = np.where(exponent % 2 == 0, 1.0, -1.0)
    return (2.0 / np.pi) * np.sum(signs / (p[:, None] - 2 * ns[None, :]), axis=1)


def _weyl_angle_matrix(N: int) -> ComplexMatrix:
    js = np.arange(-N, N + 1)
    limit = angle_limit_matrix(N).entries
    p_values = np.arange(-2 * N, 2 * N + 1)
    factors = np.ones(p_values.size)
    odd = p_values % 2 != 0
    factors[odd] = weyl_odd_factor(p_values[odd], N)
    P = js[:, None] + js[None, :]
    return ComplexMatrix(lo=-N, hi=N, entries=limit * factors[P + 2 * N])


def _dirichlet_integrals(kernel: KernelSpec, d: int, p: np.ndarray, N: int,
                         quadrature: GaussLegendreQuadrature) -> np.ndarray:
    """int K(sigma, d) D_N(sigma) exp(i sigma p/2) dsigma/2pi for each p"""
    p = np.asarray(p, dtype=float)

    def integrand(sigma: np.ndarray) -> np.ndarray:
        weight = kernel(sigma, d) * dirichlet_kernel(sigma, N)
        return weight[None, :] * np.exp(0.5j * np.outer(p, sigma))

    return quadrature.periodic_mean(integrand)


def angle_operator_dirichlet(kernel: KernelSpec, N: int,
                             quadrature: Optional[GaussLegendreQuadrature] = None) -> ComplexMatrix:
    """
    Theta_N[K] from the Dirichlet-kernel integral, one quadrature per diagonal

    Args:
        kernel: Ordering kernel
        N: Truncation
        quadrature: Integrator

    Returns:
        ComplexMatrix over [-N, N]
    """
    quadrature = quadrature or GaussLegendreQuadrature()
    dim = 2 * N + 1
    entries = np.zeros((dim, dim), dtype=complex)
    js = np.arange(-N, N + 1)

    for d in range(-2 * N, 2 * N + 1):
        if d == 0:
            continue
        ks = js[(js + d >= -N) & (js + d <= N)]
        if ks.size == 0:
            continue
        integrals = _dirichlet_integrals(kernel, d, 2 * ks + d, N, quadrature)
        entries[ks + d + N, ks + N] = angle_limit_element(d, 0) * integrals

    return ComplexMatrix(lo=-N, hi=N, entries=entries)


def angle_operator(kernel: KernelSpec, N: int,
                   quantizer: Optional[WeylQuantizer] = None) -> ComplexMatrix:
    """
    Restricted angle operator Theta_N[K]

    Built-in kernels use their closed forms; any other kernel goes through
    the generalized Weyl application of f = Theta.

    Args:
        kernel: Ordering kernel
        N: Truncation
        quantizer: Quantizer supplying quadrature settings for other kernels

    Returns:
        ComplexMatrix over [-N, N] with zero diagonal
    """
    if kernel == SYMMETRIC_KERNEL:
        return angle_limit_matrix(N)
    if kernel == WEYL_KERNEL:
        return _weyl_angle_matrix(N)

    quantizer = quantizer.with_truncation(N) if quantizer else WeylQuantizer(N=N)
    matrix = quantizer.weyl_apply(make_builtin('angle'), kernel).to_array()
    np.fill_diagonal(matrix, 0.0)
    return ComplexMatrix(lo=-N, hi=N, entries=matrix)


def angle_element(kernel: KernelSpec, j: int, k: int, N: int,
                  quadrature: Optional[GaussLegendreQuadrature] = None) -> complex:
    """
    Single entry <j|Theta_N[K]|k> without building the matrix
    """
    if max(abs(j), abs(k)) > N:
        raise RangeError(f"Entry ({j}, {k}) outside [-{N}, {N}]")
    if j == k:
        return 0j

    limit = angle_limit_element(j, k)
    if kernel == SYMMETRIC_KERNEL:
        return limit
    if kernel == WEYL_KERNEL:
        p = j + k
        return limit if p % 2 == 0 else limit * float(weyl_odd_factor(p, N)[0])

    quadrature = quadrature or GaussLegendreQuadrature()
    return limit * complex(_dirichlet_integrals(kernel, j - k, np.array([j + k]), N, quadrature)[0])


def column_norm(a: ComplexMatrix, k: int) -> float:
    """||A|k>||"""
    if not a.contains(k):
        raise RangeError(f"Column {k} outside [{a.lo}, {a.hi}]")
    return float(np.linalg.norm(a.entries[:, k - a.lo]))


def limit_column_norm(N: int) -> float:
    """||Theta_N|0>|| of the limit operator, sqrt(2 sum_{j=1}^N 1/j^2)"""
    j = np.arange(1, N + 1, dtype=float)
    return float(np.sqrt(2.0 * np.sum(1.0 / j ** 2)))


@dataclass
class AngleOperatorReport:
    """Matrix, deviation from the limit and norm data of one Theta_N[K]"""
    N: int
    kernel_name: str
    matrix: ComplexMatrix
    max_limit_deviation: float
    column_norm: float
    spectral_norm: float
    reference_column_norm: float = REFERENCE_COLUMN_NORM
    reference_operator_norm: float = REFERENCE_OPERATOR_NORM

    def to_dict(self) -> Dict:
        return {
            'N': self.N,
            'kernel': self.kernel_name,
            'max_limit_deviation': self.max_limit_deviation,
            'column_norm': self.column_norm,
            'spectral_norm': self.spectral_norm,
            'reference_column_norm': self.reference_column_norm,
            'reference_operator_norm': self.reference_operator_norm,
        }


def angle_report(kernel: KernelSpec, N: int,
                 config: Optional[Dict] = None,
                 logger: Optional[logging.Logger] = None) -> AngleOperatorReport:
    """
    Build Theta_N[K] and collect its diagnostics

    Both the column norm ||Theta_N|0>|| (-> pi/sqrt 3) and the spectral norm
    estimate (-> pi) are reported.

    Args:
        kernel: Ordering kernel
        N: Truncation
        config: Configuration dictionary ('linalg' section)
        logger: Logger instance

    Returns:
        AngleOperatorReport
    """
    config = config or {}
    logger = logger or logging.getLogger(__name__)
    linalg = config.get('linalg', {})

    quantizer = WeylQuantizer(config, logger, N=N)
    matrix = angle_operator(kernel, N, quantizer)
    deviation = matrix.max_abs_diff(angle_limit_matrix(N))

    spectral = spectral_norm_estimate(
        matrix,
        tol=float(linalg.get('power_iteration_tol', 1e-10)),
        max_iter=int(linalg.get('power_iteration_max_iter', 2000)),
        seed=int(linalg.get('seed_vector_seed', 0)),
        logger=logger,
    )

    report = AngleOperatorReport(
        N=N,
        kernel_name=kernel.name,
        matrix=matrix,
        max_limit_deviation=deviation,
        column_norm=column_norm(matrix, 0),
        spectral_norm=spectral,
    )
    logger.info(f"Angle operator N={N} kernel={kernel.name}: "
                f"max deviation from limit {deviation:.3e}, "
                f"||Theta|0>||={report.column_norm:.9f} (pi/sqrt3={REFERENCE_COLUMN_NORM:.9f}), "
                f"||Theta||_2~{spectral:.9f} (pi={REFERENCE_OPERATOR_NORM:.9f})")
    return report


def convergence_table(kernel: KernelSpec,
                      entries: Iterable[Tuple[int, int]],
                      ladder: Sequence[int] = DEFAULT_LADDER,
                      quadrature: Optional[GaussLegendreQuadrature] = None,
                      logger: Optional[logging.Logger] = None,
                      show_progress: bool = False) -> pd.DataFrame:
    """
    Entry values of Theta_N[K] along an N-ladder against the limit

    Entries outside [-N, N] at a ladder step are skipped.

    Args:
        kernel: Ordering kernel
        entries: (j, k) pairs
        ladder: Increasing truncations
        quadrature: Integrator for kernels without closed form
        logger: Logger instance
        show_progress: Show a tqdm bar over the ladder

    Returns:
        DataFrame with columns N, j, k, re, im, limit_re, limit_im, deviation
    """
    logger = logger or logging.getLogger(__name__)
    entries = list(entries)
    rows: List[Dict] = []

    for N in tqdm(ladder, desc=f"N-ladder ({kernel.name})", disable=not show_progress):
        for j, k in entries:
            if max(abs(j), abs(k)) > N:
                logger.debug(f"Skipping entry ({j}, {k}) at N={N}")
                continue
            value = angle_element(kernel, j, k, N, quadrature)
            limit = angle_limit_element(j, k)
            rows.append({
                'N': int(N), 'j': j, 'k': k,
                're': value.real, 'im': value.imag,
                'limit_re': limit.real, 'limit_im': limit.imag,
                'deviation': abs(value - limit),
            })

    table = pd.DataFrame(rows, columns=['N', 'j', 'k', 're', 'im',
                                        'limit_re', 'limit_im', 'deviation'])
    for (j, k), group in table.groupby(['j', 'k']):
        deviations = group['deviation'].to_numpy()
        if np.any(np.diff(deviations) > 1e-15):
            logger.warning(f"Entry ({j}, {k}) of {kernel.name} ordering does not "
                           f"approach the limit monotonically")
    return table
