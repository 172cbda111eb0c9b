"""
Restricted Quantizer Module
Restricted GSW quantizer and generalized Weyl application on
H_N = span{|k>, -N <= k <= N}

OBJECTS:
- U_N(sigma, l)       = sum_k exp(i sigma (k + l/2)) |k+l><k|   (|l| <= N)
- Omega_N[K](Theta,n) = sum_{j,k} exp(-i(j-k)Theta) M_K(j-k, (j+k)/2 - n) |j><k|
- f_N[K]              = sum_{j,k} [sum_n c_f(j-k, n) M_K(j-k, (j+k)/2 - n)] |j><k|

  M_K(l, m) is the kernel moment, c_f(l, n) the Fourier coefficient of
  f(., n*hbar). The factorised n-sum is the production path; the
  Theta-integral of Omega_N (triple sum) is kept for cross-checks.

CLOSED FORMS:
- weyl (K=1):        even j+k -> c_f(j-k, (j+k)/2)
                     odd j+k  -> (2/pi) sum_n (-1)^((j+k-1)/2 - n) / (j+k-2n) c_f(j-k, n)
- symmetric:         (c_f(j-k, j) + c_f(j-k, k)) / 2

Entries are defined for all |j-k| <= 2N; U_N itself only for |l| <= N.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .errors import ConfigurationError, DomainError, RangeError
from .kernel import ANGLE_EPS, KernelSpec, kernel_moments
from .observable import ClassicalObservable, fourier_coefficients
from .operators import ComplexMatrix
from .quadrature import GaussLegendreQuadrature, QuadratureConfig


@dataclass(frozen=True)
class QuantizerConfig:
    """Truncation, hbar and quadrature settings"""
    N: int
    hbar: float = 1.0
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    @classmethod
    def from_dict(cls, config: Dict, N: Optional[int] = None,
                  hbar: Optional[float] = None) -> "QuantizerConfig":
        section = config.get('quantization', {})
        settings = cls(
            N=int(N if N is not None else section.get('N', 8)),
            hbar=float(hbar if hbar is not None else section.get('hbar', 1.0)),
            quadrature=QuadratureConfig.from_dict(config),
        )
        settings.validate()
        return settings

    def validate(self) -> None:
        if self.N < 0:
            raise ConfigurationError(f"Truncation N must be >= 0, got {self.N}")
        if not self.hbar > 0:
            raise ConfigurationError(f"hbar must be positive, got {self.hbar}")


class WeylQuantizer:
    """
    Restricted generalized Weyl quantization at fixed truncation N
    """

    def __init__(self, config: Optional[Dict] = None,
                 logger: Optional[logging.Logger] = None,
                 N: Optional[int] = None,
                 hbar: Optional[float] = None):
        """
        Initialize quantizer

        Args:
            config: Configuration dictionary
            logger: Logger instance
            N: Truncation (overrides quantization.N)
            hbar: Reduced Planck constant (overrides quantization.hbar)
        """
        self.config = config or {}
        self.logger = logger or logging.getLogger(__name__)
        self.settings = QuantizerConfig.from_dict(self.config, N=N, hbar=hbar)
        self.quadrature = GaussLegendreQuadrature(self.config, self.logger)
        self._moment_cache: Dict[KernelSpec, np.ndarray] = {}

        self.logger.debug(f"Weyl quantizer initialized: N={self.N}, hbar={self.hbar}")

    @property
    def N(self) -> int:
        return self.settings.N

    @property
    def hbar(self) -> float:
        return self.settings.hbar

    @property
    def dim(self) -> int:
        return 2 * self.N + 1

    def with_truncation(self, N: int) -> "WeylQuantizer":
        return WeylQuantizer(self.config, self.logger, N=N, hbar=self.hbar)

    def _check_momentum(self, n: int) -> None:
        if abs(n) > self.N:
            raise RangeError(f"Momentum index n={n} outside [-{self.N}, {self.N}]")

    # ------------------------------------------------------------------
    # Tables
    # ------------------------------------------------------------------

    def moment_table(self, kernel: KernelSpec) -> np.ndarray:
        """
        Kernel moments M[d + 2N, p + 4N] = M_K(d, p/2)

        d = j - k in [-2N, 2N], p = j + k - 2n in [-4N, 4N].
        """
        if kernel not in self._moment_cache:
            ds = np.arange(-2 * self.N, 2 * self.N + 1)
            ms = np.arange(-4 * self.N, 4 * self.N + 1) / 2.0
            table = kernel_moments(kernel, ds, ms, self.quadrature)
            table.setflags(write=False)
            self._moment_cache[kernel] = table
            self.logger.debug(f"Moment table for kernel {kernel.name}: shape {table.shape}")
        return self._moment_cache[kernel]

    def coefficient_table(self, f: ClassicalObservable) -> np.ndarray:
        """
        Fourier coefficients C[d + 2N, n + N] = c_f(d, n) for |d| <= 2N, |n| <= N
        """
        ds = np.arange(-2 * self.N, 2 * self.N + 1)
        ns = np.arange(-self.N, self.N + 1)

        if f.theta_only:
            column = fourier_coefficients(f, ds, 0, self.hbar, self.quadrature)
            return np.repeat(column[:, None], ns.size, axis=1)

        table = np.empty((ds.size, ns.size), dtype=complex)
        for col, n in enumerate(ns):
            table[:, col] = fourier_coefficients(f, ds, int(n), self.hbar, self.quadrature)
        return table

    # ------------------------------------------------------------------
    # Restricted unitary and quantizer
    # ------------------------------------------------------------------

    def _u_diagonal(self, sigma: np.ndarray, l: int) -> np.ndarray:
        """Nonzero entries of U_N(sigma, l): rows k, columns sigma"""
        ks = np.arange(max(-self.N, -self.N - l), min(self.N, self.N - l) + 1)
        return ks, np.exp(1j * np.outer(ks + 0.5 * l, np.atleast_1d(sigma)))

    def restricted_u(self, sigma: float, l: int) -> ComplexMatrix:
        """
        U_N(sigma, l) = sum_k exp(i sigma (k + l/2)) |k+l><k|

        Args:
            sigma: Real angle
            l: Shift, |l| <= N

        Returns:
            ComplexMatrix over [-N, N]
        """
        if abs(l) > self.N:
            raise RangeError(f"Shift l={l} outside [-{self.N}, {self.N}]")

        entries = np.zeros((self.dim, self.dim), dtype=complex)
        ks, phases = self._u_diagonal(sigma, l)
        entries[ks + l + self.N, ks + self.N] = phases[:, 0]
        return ComplexMatrix(lo=-self.N, hi=self.N, entries=entries)

    def restricted_quantizer(self, kernel: KernelSpec, theta: float, n: int) -> ComplexMatrix:
        """
        Omega_N[K](Theta, n)

        Args:
            kernel: Ordering kernel
            theta: Angle in [-pi, pi)
            n: Momentum index, |n| <= N

        Returns:
            ComplexMatrix over [-N, N]
        """
        if not -np.pi - ANGLE_EPS <= theta < np.pi:
            raise DomainError(f"Theta={theta} outside [-pi, pi)")
        self._check_momentum(n)

        js = np.arange(-self.N, self.N + 1)
        D = js[:, None] - js[None, :]
        P = js[:, None] + js[None, :]
        moments = self.moment_table(kernel)[D + 2 * self.N, P - 2 * n + 4 * self.N]
        entries = np.exp(-1j * D * theta) * moments
        return ComplexMatrix(lo=-self.N, hi=self.N, entries=entries)

    def restricted_quantizer_from_u(self, kernel: KernelSpec, theta: float,
                                    n: int) -> ComplexMatrix:
        """
        Omega_N[K](Theta, n) by sigma-quadrature of K exp(-i(sigma n + l Theta)) U_N(sigma, l)

        Only shifts |l| <= N exist for U_N, so entries with |j - k| > N stay zero.
        """
        self._check_momentum(n)
        entries = np.zeros((self.dim, self.dim), dtype=complex)

        for l in range(-self.N, self.N + 1):
            ks = self._u_diagonal(0.0, l)[0]

            def integrand(sigma: np.ndarray, l=l) -> np.ndarray:
                weight = kernel(sigma, l) * np.exp(-1j * sigma * n)
                return self._u_diagonal(sigma, l)[1] * weight[None, :]

            diagonal = self.quadrature.periodic_mean(integrand)
            entries[ks + l + self.N, ks + self.N] = np.exp(-1j * l * theta) * diagonal

        return ComplexMatrix(lo=-self.N, hi=self.N, entries=entries)

    # ------------------------------------------------------------------
    # Generalized Weyl application
    # ------------------------------------------------------------------

    def weyl_apply(self, f: ClassicalObservable, kernel: KernelSpec) -> ComplexMatrix:
        """
        f_N[K] by the factorised n-sum of Fourier coefficients and kernel moments

        Args:
            f: Classical observable
            kernel: Ordering kernel

        Returns:
            ComplexMatrix over [-N, N]
        """
        N = self.N
        C = self.coefficient_table(f)
        M = self.moment_table(kernel)
        js = np.arange(-N, N + 1)
        ns = np.arange(-N, N + 1)

        entries = np.empty((self.dim, self.dim), dtype=complex)
        for row, j in enumerate(js):
            d = j - js
            p = (j + js)[:, None] - 2 * ns[None, :]
            moments = M[d[:, None] + 2 * N, p + 4 * N]
            coefficients = C[d + 2 * N, :]
            entries[row] = np.sum(coefficients * moments, axis=1)

        self.logger.debug(f"weyl_apply({f.name}, {kernel.name}) at N={N}")
        return ComplexMatrix(lo=-N, hi=N, entries=entries)

    def weyl_apply_triple_sum(self, f: ClassicalObservable, kernel: KernelSpec) -> ComplexMatrix:
        """
        f_N[K] = sum_n int f(Theta, n hbar) Omega_N[K](Theta, n) dTheta / 2pi

        Theta-quadrature of the quantizer itself; O(N^3) integrands, tests only.
        """
        N = self.N
        js = np.arange(-N, N + 1)
        D = (js[:, None] - js[None, :]).ravel()
        P = (js[:, None] + js[None, :]).ravel()
        M = self.moment_table(kernel)

        total = np.zeros(self.dim * self.dim, dtype=complex)
        for n in range(-N, N + 1):
            moments = M[D + 2 * N, P - 2 * n + 4 * N]

            def integrand(theta: np.ndarray, n=n) -> np.ndarray:
                return f(theta, n * self.hbar)[None, :] * np.exp(-1j * np.outer(D, theta))

            total += moments * self.quadrature.periodic_mean(integrand)

        return ComplexMatrix(lo=-N, hi=N, entries=total.reshape(self.dim, self.dim))

    def weyl_apply_closed_weyl(self, f: ClassicalObservable) -> ComplexMatrix:
        """
        f_N[1] from the even/odd closed form of Weyl ordering

        Args:
            f: Classical observable

        Returns:
            ComplexMatrix over [-N, N]
        """
        N = self.N
        C = self.coefficient_table(f)
        js = np.arange(-N, N + 1)
        ns = np.arange(-N, N + 1)

        entries = np.empty((self.dim, self.dim), dtype=complex)
        for row, j in enumerate(js):
            d = j - js
            p = j + js
            even = p % 2 == 0

            values = np.empty(self.dim, dtype=complex)
            values[even] = C[d[even] + 2 * N, p[even] // 2 + N]

            odd_p = p[~even]
            q = odd_p[:, None] - 2 * ns[None, :]
            exponent = (odd_p[:, None] - 1) // 2 - ns[None, :]
            signs = np.where(exponent % 2 == 0, 1.0, -1.0)
            weights = (2.0 / np.pi) * signs / q
            values[~even] = np.sum(weights * C[d[~even] + 2 * N, :], axis=1)

            entries[row] = values

        return ComplexMatrix(lo=-N, hi=N, entries=entries)

    def weyl_apply_closed_symmetric(self, f: ClassicalObservable) -> ComplexMatrix:
        """
        f_N[cos(sigma lambda / 2)]: entry (j, k) = (c_f(j-k, j) + c_f(j-k, k)) / 2

        Args:
            f: Classical observable

        Returns:
            ComplexMatrix over [-N, N]
        """
        N = self.N
        C = self.coefficient_table(f)
        js = np.arange(-N, N + 1)
        J, K = np.meshgrid(js, js, indexing='ij')
        D = J - K
        entries = 0.5 * (C[D + 2 * N, J + N] + C[D + 2 * N, K + N])
        return ComplexMatrix(lo=-N, hi=N, entries=entries)

    def weyl_element(self, f: ClassicalObservable, kernel: KernelSpec, j: int, k: int) -> complex:
        """<j|f_N[K]|k> from the factorised n-sum, without the full matrix"""
        N = self.N
        if max(abs(j), abs(k)) > N:
            raise RangeError(f"Entry ({j}, {k}) outside [-{N}, {N}]")
        d = j - k
        ns = np.arange(-N, N + 1)
        if f.theta_only:
            coefficients = np.full(ns.size, fourier_coefficients(
                f, [d], 0, self.hbar, self.quadrature)[0])
        else:
            coefficients = np.array([fourier_coefficients(f, [d], int(n), self.hbar,
                                                          self.quadrature)[0] for n in ns])
        moments = self.moment_table(kernel)[d + 2 * N, j + k - 2 * ns + 4 * N]
        return complex(np.sum(coefficients * moments))

    def element_ladder(self, f: ClassicalObservable, kernel: KernelSpec,
                       entries: Iterable[Tuple[int, int]], ladder: Sequence[int],
                       show_progress: bool = False) -> pd.DataFrame:
        """
        Entries <j|f_N[K]|k> along increasing truncations N

        The N -> infinity limit of each column defines the quantized
        operator on the full circle. Entries outside [-N, N] at a ladder
        step are skipped.

        Args:
            f: Classical observable
            kernel: Ordering kernel
            entries: (j, k) pairs
            ladder: Increasing truncations
            show_progress: Show a tqdm bar over the ladder

        Returns:
            DataFrame with columns N, j, k, re, im, change (|step to the
            previous ladder value|, NaN at the first)
        """
        entries = list(entries)
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigurationError(f"N-ladder must be strictly increasing: {list(ladder)}")

        rows = []
        previous: Dict[Tuple[int, int], complex] = {}
        for N in tqdm(ladder, desc=f"{f.name} N-ladder ({kernel.name})", disable=not show_progress):
            quantizer = self if N == self.N else self.with_truncation(int(N))
            for j, k in entries:
                if max(abs(j), abs(k)) > N:
                    continue
                value = quantizer.weyl_element(f, kernel, j, k)
                last = previous.get((j, k))
                rows.append({'N': int(N), 'j': j, 'k': k, 're': value.real, 'im': value.imag,
                             'change': abs(value - last) if last is not None else np.nan})
                previous[(j, k)] = value

        self.logger.debug(f"element_ladder({f.name}, {kernel.name}): {len(rows)} rows")
        return pd.DataFrame(rows, columns=['N', 'j', 'k', 're', 'im', 'change'])

    # ------------------------------------------------------------------
    # Structural diagnostics
    # ------------------------------------------------------------------

    def resolution_of_identity_defect(self, kernel: KernelSpec) -> float:
        """
        max-norm of sum_n int Omega_N[K](Theta, n) dTheta/2pi - 1

        The Theta integral keeps only j = k, leaving sum_n M_K(0, j - n) on the diagonal.
        """
        N = self.N
        js = np.arange(-N, N + 1)
        ns = np.arange(-N, N + 1)
        M = self.moment_table(kernel)
        diagonal = np.sum(M[2 * N, 2 * (js[:, None] - ns[None, :]) + 4 * N], axis=1)
        return float(np.max(np.abs(diagonal - 1.0)))

    def projection_defect(self, kernel: KernelSpec, theta: float, n: int, N_sub: int) -> float:
        """
        max-norm between Omega_{N_sub}[K](Theta, n) and the [-N_sub, N_sub] block
        of Omega_N[K](Theta, n)
        """
        if not 0 <= N_sub <= self.N:
            raise RangeError(f"Sub-truncation {N_sub} outside [0, {self.N}]")
        small = self.with_truncation(N_sub).restricted_quantizer(kernel, theta, n)
        block = self.restricted_quantizer(kernel, theta, n).submatrix(-N_sub, N_sub)
        return small.max_abs_diff(block)

    def trace_identity_defect(self, f: ClassicalObservable, kernel: KernelSpec) -> float:
        """
        |Tr f_N[K] - (1/2pi) sum_n int f(Theta, n hbar) dTheta|
        """
        expected = np.sum(self.coefficient_table(f)[2 * self.N, :])
        actual = np.trace(self.weyl_apply(f, kernel).entries)
        return float(abs(actual - expected))
