"""
Uncertainty Module
Angle/angular-momentum uncertainty on the circle and the phase/number
relation for the oscillator

CIRCLE (states with <Theta> = 0):
  dTheta * dL >= (hbar/2) |1 - 2pi |Psi(pi)|^2|,   Psi(pi) = sum_k c_k (-1)^k / sqrt(2pi)

OSCILLATOR (conjectured, recorded but never enforced):
  dPhi * dN >= (1/2) |1 - |sum_n (-1)^n c_n|^2|

Theta uses the limit entries and Theta^2 its own Fourier entries, both
truncated to [-N, N]; L is diagonal.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .angle import angle_limit_matrix, angle_squared_matrix
from .errors import ConfigurationError, SamplingError
from .operators import StateVector
from .phase import DEFAULT_PHI0, NumberStateVector, pov_moment
from .utils import get_num_threads

# Slack on lhs >= rhs for the equality cases
EQUALITY_TOL = 1e-12

STATE_FAMILIES = ('real', 'parity', 'complex')


@dataclass
class UncertaintyReport:
    """
    One uncertainty check

    For mode 'circle' the spreads are dTheta, dL and boundary_probability is
    |Psi(pi)|^2; for 'phase-conjecture' they are dPhi, dN and |sum (-1)^n c_n|^2.
    """
    mode: str
    mean_angle: float
    delta_angle: float
    delta_momentum: float
    boundary_probability: float
    lhs: float
    rhs: float
    applicable: bool
    satisfied: Optional[bool]
    conjecture: bool = False

    def to_dict(self) -> Dict:
        return asdict(self)


@lru_cache(maxsize=8)
def _circle_operators(N: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = angle_limit_matrix(N).entries
    theta_squared = angle_squared_matrix(N).entries
    return theta, theta_squared


def angle_mean(psi: StateVector, N: int) -> float:
    c = psi.padded(-N, N)
    theta, _ = _circle_operators(N)
    return float(np.vdot(c, theta @ c).real)


def circle_dispersions(psi: StateVector, N: int, hbar: float = 1.0) -> Tuple[float, float, float]:
    """
    (<Theta>, dTheta, dL) of a circle state

    Args:
        psi: State supported in [-N, N]
        N: Truncation
        hbar: Reduced Planck constant

    Returns:
        Mean angle and the two standard deviations
    """
    c = psi.padded(-N, N)
    theta, theta_squared = _circle_operators(N)
    norm2 = np.vdot(c, c).real

    mean = np.vdot(c, theta @ c).real / norm2
    second = np.vdot(c, theta_squared @ c).real / norm2
    delta_angle = np.sqrt(max(second - mean ** 2, 0.0))

    probabilities = np.abs(c) ** 2 / norm2
    momenta = hbar * np.arange(-N, N + 1)
    mean_momentum = np.sum(probabilities * momenta)
    delta_momentum = np.sqrt(max(np.sum(probabilities * momenta ** 2) - mean_momentum ** 2, 0.0))

    return float(mean), float(delta_angle), float(delta_momentum)


def boundary_amplitude(psi: StateVector) -> complex:
    """Psi(pi) = sum_k c_k (-1)^k / sqrt(2pi)"""
    signs = np.where(psi.indices % 2 == 0, 1.0, -1.0)
    return complex(np.sum(signs * psi.coefficients) / np.sqrt(2.0 * np.pi))


def check_theta_l_uncertainty(psi: StateVector, N: int, hbar: float = 1.0,
                              centering_tol: float = 1e-8) -> UncertaintyReport:
    """
    Check dTheta dL >= (hbar/2)|1 - 2pi|Psi(pi)|^2| for a centred state

    A state with |<Theta>| > centering_tol yields a report with
    applicable=False and satisfied=None.

    Args:
        psi: Unit-norm state supported in [-N, N]
        N: Truncation
        hbar: Reduced Planck constant
        centering_tol: Admissible |<Theta>|

    Returns:
        UncertaintyReport

    Raises:
        ConfigurationError: psi is not of unit norm
    """
    if not psi.is_normalized():
        raise ConfigurationError(f"Uncertainty check needs a unit-norm state "
                                 f"(|psi|^2 = {psi.norm() ** 2:.15g})")
    mean, delta_angle, delta_momentum = circle_dispersions(psi, N, hbar)
    boundary = abs(boundary_amplitude(psi)) ** 2
    lhs = delta_angle * delta_momentum
    rhs = 0.5 * hbar * abs(1.0 - 2.0 * np.pi * boundary)
    applicable = abs(mean) <= centering_tol

    return UncertaintyReport(
        mode='circle',
        mean_angle=mean,
        delta_angle=delta_angle,
        delta_momentum=delta_momentum,
        boundary_probability=boundary,
        lhs=lhs,
        rhs=rhs,
        applicable=applicable,
        satisfied=bool(lhs >= rhs - EQUALITY_TOL) if applicable else None,
    )


def _conjecture_report(psi: NumberStateVector, phi0: float) -> UncertaintyReport:
    mean_phase = pov_moment(psi, 1, phi0)
    delta_phase = np.sqrt(max(pov_moment(psi, 2, phi0) - mean_phase ** 2, 0.0))

    probabilities = psi.probabilities
    ns = np.arange(psi.s + 1)
    mean_number = np.sum(probabilities * ns)
    delta_number = np.sqrt(max(np.sum(probabilities * ns ** 2) - mean_number ** 2, 0.0))

    signs = np.where(ns % 2 == 0, 1.0, -1.0)
    boundary = abs(np.sum(signs * psi.coefficients)) ** 2
    lhs = float(delta_phase * delta_number)
    rhs = 0.5 * abs(1.0 - boundary)

    return UncertaintyReport(
        mode='phase-conjecture',
        mean_angle=float(mean_phase),
        delta_angle=float(delta_phase),
        delta_momentum=float(delta_number),
        boundary_probability=float(boundary),
        lhs=lhs,
        rhs=float(rhs),
        applicable=True,
        satisfied=bool(lhs >= rhs - EQUALITY_TOL),
        conjecture=True,
    )


def conjecture_phase_number_experiment(psi: NumberStateVector,
                                       phi0: float = DEFAULT_PHI0,
                                       logger: Optional[logging.Logger] = None) -> UncertaintyReport:
    """
    Evaluate the conjectured dPhi dN >= (1/2)|1 - |sum (-1)^n c_n|^2|

    dPhi comes from the POV moments, dN from |c_n|^2. The outcome is logged
    and returned, never raised.

    Args:
        psi: Number state
        phi0: Reference phase
        logger: Logger instance

    Returns:
        UncertaintyReport with conjecture=True
    """
    logger = logger or logging.getLogger(__name__)
    report = _conjecture_report(psi, phi0)
    logger.info(f"Phase/number relation: dPhi*dN={report.lhs:.9f}, "
                f"bound={report.rhs:.9f}, holds={report.satisfied}")
    return report


# ----------------------------------------------------------------------
# Random states
# ----------------------------------------------------------------------

def _random_window(rng: np.random.Generator, N: int) -> Tuple[int, int]:
    a, b = sorted(int(x) for x in rng.integers(-N, N + 1, size=2))
    return a, b


def _candidate_state(rng: np.random.Generator, N: int, family: str) -> StateVector:
    dim = 2 * N + 1
    coefficients = np.zeros(dim, dtype=complex)

    if family == 'real':
        a, b = _random_window(rng, N)
        coefficients[a + N:b + N + 1] = rng.standard_normal(b - a + 1)
        coefficients *= np.exp(1j * rng.uniform(-np.pi, np.pi))
    elif family == 'parity':
        # c_{-k} = +-c_k makes |Psi(Theta)|^2 even in Theta
        cutoff = int(rng.integers(0, N + 1))
        sign = 1.0 if rng.integers(2) == 0 else -1.0
        z = rng.standard_normal(cutoff) + 1j * rng.standard_normal(cutoff)
        if sign > 0:
            coefficients[N] = rng.standard_normal() + 1j * rng.standard_normal()
        coefficients[N + 1:N + cutoff + 1] = z
        coefficients[N - cutoff:N] = sign * z[::-1]
    elif family == 'complex':
        a, b = _random_window(rng, N)
        size = b - a + 1
        coefficients[a + N:b + N + 1] = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    else:
        raise ConfigurationError(f"Unknown state family: {family!r}")

    if not np.any(coefficients):
        coefficients[N] = 1.0
    return StateVector(lo=-N, hi=N, coefficients=coefficients).normalized()


def sample_centered_states(count: int, N: int, rng: np.random.Generator,
                           centering_tol: float = 1e-8,
                           max_attempts: int = 100000,
                           logger: Optional[logging.Logger] = None) -> List[StateVector]:
    """
    Rejection-sample random circle states with |<Theta>| <= centering_tol

    Candidates are drawn from real, parity-symmetric and generic complex
    coefficient families on random index windows.

    Args:
        count: Number of states
        N: Truncation
        rng: Seeded numpy Generator
        centering_tol: Admissible |<Theta>|
        max_attempts: Candidate budget
        logger: Logger instance

    Returns:
        List of unit-norm StateVector over [-N, N]
    """
    logger = logger or logging.getLogger(__name__)
    states: List[StateVector] = []
    attempts = 0

    while len(states) < count:
        if attempts >= max_attempts:
            raise SamplingError(f"Collected {len(states)} of {count} centred states "
                                f"in {max_attempts} attempts")
        attempts += 1
        family = STATE_FAMILIES[int(rng.integers(len(STATE_FAMILIES)))]
        candidate = _candidate_state(rng, N, family)
        if abs(angle_mean(candidate, N)) <= centering_tol:
            states.append(candidate)

    logger.debug(f"Sampled {count} centred states in {attempts} attempts "
                 f"(acceptance {count / max(attempts, 1):.2%})")
    return states


def random_number_states(count: int, s: int, rng: np.random.Generator) -> List[NumberStateVector]:
    """Random complex Gaussian number states on [0, s] with random cutoff"""
    states = []
    for _ in range(count):
        cutoff = int(rng.integers(0, s + 1))
        coefficients = np.zeros(s + 1, dtype=complex)
        coefficients[:cutoff + 1] = (rng.standard_normal(cutoff + 1)
                                     + 1j * rng.standard_normal(cutoff + 1))
        states.append(NumberStateVector.from_coefficients(coefficients, normalize=True))
    return states


# ----------------------------------------------------------------------
# Batches
# ----------------------------------------------------------------------

def _run_parallel(func, items: Sequence, desc: str, show_progress: bool) -> List:
    threads = get_num_threads()
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(tqdm(executor.map(func, items), total=len(items), desc=desc,
                         disable=not show_progress))


def run_circle_batch(states: Sequence[StateVector], N: int, hbar: float = 1.0,
                     centering_tol: float = 1e-8,
                     logger: Optional[logging.Logger] = None,
                     show_progress: bool = False) -> pd.DataFrame:
    """
    Angle/angular-momentum check for a batch of states

    Returns:
        DataFrame with one UncertaintyReport per row, in input order
    """
    logger = logger or logging.getLogger(__name__)
    reports = _run_parallel(lambda psi: check_theta_l_uncertainty(psi, N, hbar, centering_tol),
                            states, "Circle states", show_progress)
    frame = pd.DataFrame([r.to_dict() for r in reports])

    applicable = int(frame['applicable'].sum()) if len(frame) else 0
    logger.info(f"Angle/angular-momentum bound: {count_violations(frame)} violations "
                f"among {applicable} centred states ({len(frame)} total)")
    return frame


def run_conjecture_batch(states: Sequence[NumberStateVector],
                         phi0: float = DEFAULT_PHI0,
                         logger: Optional[logging.Logger] = None,
                         show_progress: bool = False) -> pd.DataFrame:
    """
    Phase/number conjecture for a batch of number states

    Returns:
        DataFrame with one UncertaintyReport per row, in input order
    """
    logger = logger or logging.getLogger(__name__)
    reports = _run_parallel(lambda psi: _conjecture_report(psi, phi0),
                            states, "Number states", show_progress)
    frame = pd.DataFrame([r.to_dict() for r in reports])
    logger.info(f"Phase/number conjecture: {count_violations(frame)} violations "
                f"in {len(frame)} states")
    return frame


def count_violations(frame: pd.DataFrame) -> int:
    """Applicable rows whose inequality failed"""
    if frame.empty:
        return 0
    failed = frame['applicable'] & (frame['satisfied'] == False)  # noqa: E712
    return int(failed.sum())
