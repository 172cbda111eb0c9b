"""
Phase Module
Quantum phase of the oscillator: Naimark embedding of number states into
the circle, Garrison-Wong and Pegg-Barnett phase operators, and the phase
POV measure

PHASE WINDOW: [phi0, phi0 + 2pi), phi0 = -pi by default

OPERATORS ON [0, s]:
- GW:  <j|Phi|k> = exp(i(j-k)phi0) / (i(j-k)),  <j|Phi|j> = phi0 + pi
- PB:  Phi_m = phi0 + 2 pi m/(s+1), |Phi_m> = (s+1)^(-1/2) sum_n exp(i n Phi_m)|n>
       <j|Phi|k> = (2pi/(s+1)) exp(i d phi0) / (exp(2 pi i d/(s+1)) - 1),  d = j-k
       <j|Phi|j> = phi0 + s pi/(s+1)

POV DENSITY: rho(phi) = (1/2pi) |sum_n c_n exp(-i n phi)|^2

All three are Toeplitz in the number basis, so moments and products use
symbols t(d) and scipy's Toeplitz routines instead of dense s x s matrices.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, Optional, Union

import numpy as np
import scipy.fft
import scipy.linalg

from .errors import ConfigurationError, DimensionError, DomainError, RangeError
from .kernel import ANGLE_EPS
from .observable import make_builtin
from .operators import ComplexMatrix, StateVector, diagonal_matrix, read_fields
from .quadrature import GaussLegendreQuadrature
from .quantizer import WeylQuantizer
from .utils import read_json, write_json

PhaseFunction = Callable[[np.ndarray], np.ndarray]

DEFAULT_PHI0 = -np.pi

# Above this dimension Toeplitz products go through scipy.linalg.matmul_toeplitz
DENSE_TOEPLITZ_LIMIT = 2048

# Named phase functions accepted wherever g may be given as a string
PHASE_FUNCTIONS: Dict[str, PhaseFunction] = {
    'one': lambda phi: np.ones_like(phi),
    'identity': lambda phi: phi,
    'square': lambda phi: phi ** 2,
    'cos': np.cos,
    'sin': np.sin,
}


def resolve_phase_function(g: Union[str, PhaseFunction]) -> PhaseFunction:
    if callable(g):
        return g
    try:
        return PHASE_FUNCTIONS[g]
    except KeyError:
        raise ConfigurationError(
            f"Unknown phase function: {g!r} (available: {sorted(PHASE_FUNCTIONS)})") from None


# ----------------------------------------------------------------------
# Number states
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NumberStateVector:
    """
    Oscillator state sum_{n=0}^{s} c_n |n>

    Attributes:
        s: Truncation (indices 0..s)
        coefficients: Complex array of length s + 1, unit norm
    """
    s: int
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=complex, copy=True)
        if self.s < 0 or coefficients.shape != (self.s + 1,):
            raise DimensionError(f"Expected {self.s + 1} coefficients, got shape "
                                 f"{coefficients.shape}")
        norm_defect = abs(np.vdot(coefficients, coefficients).real - 1.0)
        if norm_defect > 1e-12:
            raise ConfigurationError(f"Number state is not normalized "
                                     f"(|norm^2 - 1| = {norm_defect:.3e})")
        coefficients.setflags(write=False)
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def from_coefficients(cls, coefficients: Iterable, normalize: bool = False) -> "NumberStateVector":
        coefficients = np.asarray(list(coefficients), dtype=complex)
        if normalize:
            norm = np.linalg.norm(coefficients)
            if norm == 0.0:
                raise ConfigurationError("Cannot normalize the zero vector")
            coefficients = coefficients / norm
        return cls(s=coefficients.size - 1, coefficients=coefficients)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    def as_state_vector(self) -> StateVector:
        return StateVector(lo=0, hi=self.s, coefficients=self.coefficients)

    def to_dict(self) -> Dict:
        return {
            's': int(self.s),
            'coefficients': [[float(c.real), float(c.imag)] for c in self.coefficients],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "NumberStateVector":
        fields = read_fields(data, 'number state file', 's', 'coefficients*')
        if fields['coefficients'].size != fields['s'] + 1:
            raise DimensionError(f"State file declares s={fields['s']} but holds "
                                 f"{fields['coefficients'].size} coefficients")
        return cls.from_coefficients(fields['coefficients'])


def number_state(n: int, s: int) -> NumberStateVector:
    """|n> in [0, s]"""
    if not 0 <= n <= s:
        raise RangeError(f"Number state n={n} outside [0, {s}]")
    coefficients = np.zeros(s + 1, dtype=complex)
    coefficients[n] = 1.0
    return NumberStateVector(s=s, coefficients=coefficients)


def save_state_json(state: NumberStateVector, output_path: Union[str, Path]) -> None:
    write_json(state.to_dict(), str(output_path))


def load_state_json(input_path: Union[str, Path]) -> NumberStateVector:
    return NumberStateVector.from_dict(read_json(str(input_path)))


def embed(psi: NumberStateVector, N: Optional[int] = None) -> StateVector:
    """
    Isometric embedding sum c_n|n> -> sum c_n|n> into the circle basis [-N, N]

    Args:
        psi: Number state
        N: Circle truncation, defaults to psi.s

    Returns:
        StateVector with zero coefficients at negative indices
    """
    N = psi.s if N is None else N
    if N < psi.s:
        raise DimensionError(f"Circle truncation N={N} cannot hold number states up to s={psi.s}")
    return StateVector(lo=-N, hi=N, coefficients=psi.as_state_vector().padded(-N, N))


def naimark_compress(a: ComplexMatrix) -> ComplexMatrix:
    """Compression of a circle operator to the non-negative indices 0..hi"""
    if a.lo > 0:
        raise RangeError(f"Operator range [{a.lo}, {a.hi}] does not contain index 0")
    return a.submatrix(0, a.hi)


def number_operator_matrix(s: int) -> ComplexMatrix:
    """Truncated number operator diag(0, 1, ..., s)"""
    return diagonal_matrix(np.arange(s + 1), lo=0)


# ----------------------------------------------------------------------
# Toeplitz helpers
# ----------------------------------------------------------------------

def _toeplitz_matvec(symbol: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """y_j = sum_k t(j - k) x_k over indices 0..len(x)-1"""
    size = x.size
    column = symbol(np.arange(size))
    row = symbol(-np.arange(size))
    if size <= DENSE_TOEPLITZ_LIMIT:
        return scipy.linalg.toeplitz(column, row) @ x
    return scipy.linalg.matmul_toeplitz((column, row), x)


def _toeplitz_matrix(symbol: Callable[[np.ndarray], np.ndarray], s: int) -> ComplexMatrix:
    column = symbol(np.arange(s + 1))
    row = symbol(-np.arange(s + 1))
    return ComplexMatrix(lo=0, hi=s, entries=scipy.linalg.toeplitz(column, row))


def _gw_symbol(phi0: float) -> Callable[[np.ndarray], np.ndarray]:
    def symbol(d: np.ndarray) -> np.ndarray:
        d = np.asarray(d)
        safe = np.where(d == 0, 1, d)
        return np.where(d == 0, phi0 + np.pi, np.exp(1j * d * phi0) / (1j * safe))
    return symbol


def _pb_symbol(s: int, phi0: float) -> Callable[[np.ndarray], np.ndarray]:
    step = 2.0 * np.pi / (s + 1)

    def symbol(d: np.ndarray) -> np.ndarray:
        d = np.asarray(d)
        denominator = np.exp(1j * step * d) - 1.0
        safe = np.where(d % (s + 1) == 0, 1.0, denominator)
        return np.where(d == 0, phi0 + s * np.pi / (s + 1),
                        step * np.exp(1j * d * phi0) / safe)
    return symbol


def _pov_moment_symbol(power: int, phi0: float) -> Callable[[np.ndarray], np.ndarray]:
    """
    t(d) = (1/2pi) int_{phi0}^{phi0+2pi} phi^p exp(i d phi) dphi for p in {0, 1, 2}

    With this symbol <psi|T|psi> is the p-th moment of the POV density.
    """
    a, b = phi0, phi0 + 2.0 * np.pi

    def symbol(d: np.ndarray) -> np.ndarray:
        d = np.asarray(d)
        safe = np.where(d == 0, 1, d).astype(float)
        edge = np.exp(1j * d * a)
        if power == 0:
            return (d == 0).astype(complex)
        if power == 1:
            return np.where(d == 0, a + np.pi, -1j * edge / safe)
        if power == 2:
            return np.where(d == 0, (b ** 3 - a ** 3) / (6.0 * np.pi),
                            -1j * edge * (a + b) / safe + 2.0 * edge / safe ** 2)
        raise ConfigurationError(f"POV moments are available for powers 0, 1, 2, got {power}")
    return symbol


def _quadratic_form(symbol: Callable[[np.ndarray], np.ndarray], c: np.ndarray) -> complex:
    return complex(np.vdot(c, _toeplitz_matvec(symbol, c)))


# ----------------------------------------------------------------------
# Garrison-Wong
# ----------------------------------------------------------------------

def gw_phase_element(j: int, k: int, phi0: float = DEFAULT_PHI0) -> complex:
    """<j|Phi_GW|k>"""
    return complex(_gw_symbol(phi0)(np.array(j - k)))


def gw_phase_matrix(s: int, phi0: float = DEFAULT_PHI0) -> ComplexMatrix:
    """
    Garrison-Wong phase operator truncated to [0, s]

    Args:
        s: Truncation
        phi0: Reference phase

    Returns:
        Hermitian ComplexMatrix over [0, s]
    """
    if s < 0:
        raise RangeError(f"Truncation s must be >= 0, got {s}")
    return _toeplitz_matrix(_gw_symbol(phi0), s)


def gw_apply(psi: NumberStateVector, phi0: float = DEFAULT_PHI0) -> np.ndarray:
    """Phi_GW |psi> truncated to [0, s], without the s x s matrix"""
    return _toeplitz_matvec(_gw_symbol(phi0), psi.coefficients)


def gw_variance_series(n: int, s: int) -> float:
    """
    Truncated GW variance of |n> as sum_{d=1}^{n} 1/d^2 + sum_{d=1}^{s-n} 1/d^2
    """
    if not 0 <= n <= s:
        raise RangeError(f"Number state n={n} outside [0, {s}]")
    below = np.arange(1, n + 1, dtype=float)
    above = np.arange(1, s - n + 1, dtype=float)
    return float(np.sum(1.0 / below ** 2) + np.sum(1.0 / above ** 2))


def gw_variance_harmonic(n: int) -> float:
    """GW variance of |n> in the form pi^2/6 + sum_{k=1}^{n} 1/k"""
    return float(np.pi ** 2 / 6.0 + np.sum(1.0 / np.arange(1, n + 1, dtype=float)))


def gw_variance_limit(n: int) -> float:
    """s -> infinity value of gw_variance_series: pi^2/6 + sum_{k=1}^{n} 1/k^2"""
    return float(np.pi ** 2 / 6.0 + np.sum(1.0 / np.arange(1, n + 1, dtype=float) ** 2))


# ----------------------------------------------------------------------
# Pegg-Barnett
# ----------------------------------------------------------------------

def pb_phases(s: int, phi0: float = DEFAULT_PHI0) -> np.ndarray:
    """Phi_m = phi0 + 2 pi m/(s+1), m = 0..s"""
    return phi0 + 2.0 * np.pi * np.arange(s + 1) / (s + 1)


def pb_phase_state(m: int, s: int, phi0: float = DEFAULT_PHI0) -> NumberStateVector:
    """
    Phase state |Phi_m> = (s+1)^(-1/2) sum_n exp(i n Phi_m)|n>

    Args:
        m: Phase index, 0 <= m <= s
        s: Truncation
        phi0: Reference phase

    Returns:
        NumberStateVector
    """
    if not 0 <= m <= s:
        raise RangeError(f"Phase index m={m} outside [0, {s}]")
    phi_m = pb_phases(s, phi0)[m]
    coefficients = np.exp(1j * np.arange(s + 1) * phi_m) / np.sqrt(s + 1)
    return NumberStateVector(s=s, coefficients=coefficients)


def pb_phase_element(j: int, k: int, s: int, phi0: float = DEFAULT_PHI0) -> complex:
    """<j|Phi_PB|k> at truncation s from the explicit form"""
    if not (0 <= j <= s and 0 <= k <= s):
        raise RangeError(f"Entry ({j}, {k}) outside [0, {s}]")
    return complex(_pb_symbol(s, phi0)(np.array(j - k)))


def pb_phase_matrix(s: int, phi0: float = DEFAULT_PHI0, form: str = 'explicit') -> ComplexMatrix:
    """
    Pegg-Barnett phase operator on [0, s]

    Args:
        s: Truncation
        phi0: Reference phase
        form: 'explicit' (closed-form entries) or 'spectral' (sum_m Phi_m |Phi_m><Phi_m|)

    Returns:
        Hermitian ComplexMatrix with eigenvalues Phi_m
    """
    if s < 0:
        raise RangeError(f"Truncation s must be >= 0, got {s}")
    if form == 'explicit':
        return _toeplitz_matrix(_pb_symbol(s, phi0), s)
    if form == 'spectral':
        phases = pb_phases(s, phi0)
        states = np.exp(1j * np.outer(np.arange(s + 1), phases)) / np.sqrt(s + 1)
        return ComplexMatrix(lo=0, hi=s, entries=(states * phases) @ states.conj().T)
    raise ConfigurationError(f"Unknown PB matrix form: {form!r}")


def pb_amplitudes(psi: NumberStateVector, resolution: Optional[int] = None,
                  phi0: float = DEFAULT_PHI0) -> np.ndarray:
    """
    <Phi_m|psi> for m = 0..resolution on the (resolution+1)-point phase grid

    The amplitudes are one FFT of c_n exp(-i n phi0), zero padded.
    """
    resolution = psi.s if resolution is None else int(resolution)
    if resolution < psi.s:
        raise RangeError(f"PB resolution {resolution} is below the state truncation {psi.s}")
    shifted = psi.coefficients * np.exp(-1j * np.arange(psi.s + 1) * phi0)
    return scipy.fft.fft(shifted, n=resolution + 1) / np.sqrt(resolution + 1)


@dataclass
class PhaseDistribution:
    """
    Phase statistics on [phi0, phi0 + 2pi)

    kind 'discrete': support Phi_m with probabilities p_m
    kind 'density':  uniform grid with density values, weights 2pi/M
    """
    phi0: float
    kind: str
    support: np.ndarray
    values: np.ndarray

    @property
    def weights(self) -> np.ndarray:
        if self.kind == 'discrete':
            return self.values
        return self.values * (2.0 * np.pi / self.support.size)

    def total(self) -> float:
        return float(np.sum(self.weights))

    def expectation(self, g: Union[str, PhaseFunction]) -> complex:
        g = resolve_phase_function(g)
        return complex(np.sum(np.asarray(g(self.support), dtype=complex) * self.weights))

    def mean(self) -> float:
        return float(np.sum(self.support * self.weights))

    def variance(self) -> float:
        mean = self.mean()
        return float(np.sum((self.support - mean) ** 2 * self.weights))

    def min_value(self) -> float:
        return float(np.min(self.values))


def pb_distribution(psi: NumberStateVector, resolution: Optional[int] = None,
                    phi0: float = DEFAULT_PHI0) -> PhaseDistribution:
    """PB phase probabilities |<Phi_m|psi>|^2 at truncation `resolution` (>= psi.s)"""
    resolution = psi.s if resolution is None else int(resolution)
    probabilities = np.abs(pb_amplitudes(psi, resolution, phi0)) ** 2
    return PhaseDistribution(phi0=phi0, kind='discrete',
                             support=pb_phases(resolution, phi0), values=probabilities)


def pb_expectation(g: Union[str, PhaseFunction], psi: NumberStateVector,
                   resolution: int = 1_000_000, phi0: float = DEFAULT_PHI0) -> complex:
    """
    PB expectation sum_m g(Phi_m) |<Phi_m|psi>|^2 at a large truncation

    As the resolution grows this tends to the POV expectation.
    """
    return pb_distribution(psi, resolution, phi0).expectation(g)


# ----------------------------------------------------------------------
# POV measure
# ----------------------------------------------------------------------

def pov_density(psi: NumberStateVector, phi) -> np.ndarray:
    """
    (1/2pi) |sum_n c_n exp(-i n phi)|^2

    Args:
        psi: Number state
        phi: Phase value(s)

    Returns:
        Non-negative density values with the shape of phi
    """
    phi = np.asarray(phi, dtype=float)
    flat = phi.ravel()
    amplitudes = np.exp(-1j * np.outer(flat, np.arange(psi.s + 1))) @ psi.coefficients
    return (np.abs(amplitudes) ** 2 / (2.0 * np.pi)).reshape(phi.shape)


def pov_distribution(psi: NumberStateVector, grid: int = 1024,
                     phi0: float = DEFAULT_PHI0) -> PhaseDistribution:
    """
    POV density on the uniform grid phi0 + 2 pi i / grid

    Grid sums are exact for grid > 2s.
    """
    if grid < 1:
        raise ConfigurationError(f"POV grid must have at least one point, got {grid}")
    support = phi0 + 2.0 * np.pi * np.arange(grid) / grid
    return PhaseDistribution(phi0=phi0, kind='density', support=support,
                             values=pov_density(psi, support))


def pov_probability(a: float, b: float, psi: NumberStateVector) -> float:
    """
    <psi|M([a, b))|psi> by the closed double sum

    Args:
        a: Lower edge, >= -pi
        b: Upper edge, <= pi, > a
        psi: Number state

    Returns:
        Probability in [0, 1]
    """
    if not (-np.pi - ANGLE_EPS <= a < b <= np.pi + ANGLE_EPS):
        raise DomainError(f"Invalid phase interval [{a}, {b}) in [-pi, pi]")

    def symbol(d: np.ndarray) -> np.ndarray:
        # (1/2pi) int_a^b exp(i d phi) dphi
        d = np.asarray(d)
        safe = np.where(d == 0, 1, d).astype(float)
        integral = (np.exp(1j * d * b) - np.exp(1j * d * a)) / (1j * safe)
        return np.where(d == 0, b - a, integral) / (2.0 * np.pi)

    return float(_quadratic_form(symbol, psi.coefficients).real)


def pov_moment(psi: NumberStateVector, power: int, phi0: float = DEFAULT_PHI0) -> float:
    """int_{phi0}^{phi0+2pi} phi^p rho(phi) dphi for p in {0, 1, 2}"""
    return float(_quadratic_form(_pov_moment_symbol(power, phi0), psi.coefficients).real)


def phase_expectation(g: Union[str, PhaseFunction], psi: NumberStateVector,
                      method: str = 'pov',
                      phi0: float = DEFAULT_PHI0,
                      quadrature: Optional[GaussLegendreQuadrature] = None) -> complex:
    """
    Expectation of g(Phi) in the phase POV measure

    Args:
        g: Phase function or one of 'one', 'identity', 'square', 'cos', 'sin'
        psi: Number state
        method: 'pov' (quadrature of g against the density) or 'operator'
            (compression of the symmetric-ordered g(-Theta) on [-s, s])
        phi0: Reference phase
        quadrature: Integrator for the 'pov' path

    Returns:
        Expectation value
    """
    if method == 'pov':
        func = resolve_phase_function(g)
        quadrature = quadrature or GaussLegendreQuadrature()

        def integrand(phi: np.ndarray) -> np.ndarray:
            return np.asarray(func(phi), dtype=complex) * pov_density(psi, phi)

        return quadrature.integrate(integrand, phi0, phi0 + 2.0 * np.pi)

    if method == 'operator':
        if abs(phi0 - DEFAULT_PHI0) > ANGLE_EPS:
            raise ConfigurationError("The operator path uses the window [-pi, pi) only")
        pullback = make_builtin('phase_pullback', g=g)
        quantizer = WeylQuantizer(N=psi.s, hbar=1.0)
        operator = naimark_compress(quantizer.weyl_apply_closed_symmetric(pullback))
        c = psi.coefficients
        return complex(np.vdot(c, operator.entries @ c))

    raise ConfigurationError(f"Unknown phase expectation method: {method!r}")


# ----------------------------------------------------------------------
# Variances
# ----------------------------------------------------------------------

PHASE_METHODS = ('gw', 'pb', 'pov')


def phase_variance(psi: NumberStateVector, method: str,
                   phi0: float = DEFAULT_PHI0,
                   resolution: Optional[int] = None) -> float:
    """
    Phase variance of a number-basis state

    Args:
        psi: Number state
        method: 'gw' (truncated GW operator), 'pb' (PB at truncation
            `resolution`, default psi.s) or 'pov'
        phi0: Reference phase
        resolution: PB truncation

    Returns:
        Variance
    """
    if method == 'gw':
        c = psi.coefficients
        image = gw_apply(psi, phi0)
        mean = np.vdot(c, image).real
        return float(np.vdot(image, image).real - mean ** 2)
    if method == 'pb':
        return pb_distribution(psi, resolution, phi0).variance()
    if method == 'pov':
        mean = pov_moment(psi, 1, phi0)
        return pov_moment(psi, 2, phi0) - mean ** 2
    raise ConfigurationError(f"Unknown phase method: {method!r} (available: {PHASE_METHODS})")


def number_state_phase_variance(method: str, n: int, s: int,
                                phi0: float = DEFAULT_PHI0,
                                logger: Optional[logging.Logger] = None) -> float:
    """
    Phase variance of |n> at truncation s

    For 'gw' the value is compared with the closed series and with the
    formula pi^2/6 + sum 1/k; a mismatch with the latter is logged.

    Args:
        method: 'gw', 'pb' or 'pov'
        n: Number state, n <= s
        s: Truncation
        phi0: Reference phase
        logger: Logger instance

    Returns:
        Variance
    """
    logger = logger or logging.getLogger(__name__)
    if not 0 <= n <= s:
        raise RangeError(f"Number state n={n} outside [0, {s}]")

    variance = phase_variance(number_state(n, s), method, phi0)

    if method == 'gw' and n >= 1:
        harmonic = gw_variance_harmonic(n)
        limit = gw_variance_limit(n)
        if abs(harmonic - limit) > 1e-12:
            logger.warning(f"GW variance of |{n}>: truncated value {variance:.9f} at s={s} "
                           f"tends to pi^2/6 + sum 1/k^2 = {limit:.9f}, not "
                           f"pi^2/6 + sum 1/k = {harmonic:.9f}")
    logger.debug(f"{method.upper()} phase variance of |{n}> at s={s}: {variance:.12f}")
    return variance
