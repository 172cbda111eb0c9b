"""
Operator Core Module
Dense complex matrices and state vectors over explicit integer index ranges

INDEXING:
  A ComplexMatrix covers basis indices lo..hi (e.g. -N..N for the circle,
  0..s for number states). Element (j, k) lives at entries[j - lo, k - lo];
  callers always address by basis index, never by array offset.

EXPORT FORMATS:
  JSON: {"lo": int, "hi": int, "entries": [[re, im], ...]} row-major
  CSV:  columns j,k,re,im with 17 significant digits
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

import numpy as np
import pandas as pd

from .errors import ConfigurationError, DimensionError, RangeError
from .utils import read_json, write_json

Scalar = Union[int, float, complex]


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """
    Dense complex matrix indexed by (j, k) in [lo, hi]^2

    Attributes:
        lo: Lowest basis index
        hi: Highest basis index
        entries: Complex array of shape (hi - lo + 1, hi - lo + 1), read-only
    """
    lo: int
    hi: int
    entries: np.ndarray

    def __post_init__(self):
        if self.hi < self.lo:
            raise RangeError(f"Empty index range [{self.lo}, {self.hi}]")
        dim = self.hi - self.lo + 1
        entries = _frozen(self.entries)
        if entries.shape != (dim, dim):
            raise DimensionError(f"Entries shape {entries.shape} does not match range "
                                 f"[{self.lo}, {self.hi}]")
        if not np.all(np.isfinite(entries)):
            raise ConfigurationError("Matrix entries must be finite")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_array(cls, array: np.ndarray, lo: int) -> "ComplexMatrix":
        array = np.asarray(array)
        return cls(lo=lo, hi=lo + array.shape[0] - 1, entries=array)

    @property
    def dim(self) -> int:
        return self.hi - self.lo + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def contains(self, j: int) -> bool:
        return self.lo <= j <= self.hi

    def __getitem__(self, jk) -> complex:
        j, k = jk
        if not (self.contains(j) and self.contains(k)):
            raise RangeError(f"Entry ({j}, {k}) outside [{self.lo}, {self.hi}]")
        return complex(self.entries[j - self.lo, k - self.lo])

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, copy=True)

    def submatrix(self, lo: int, hi: int) -> "ComplexMatrix":
        """Restriction to basis indices lo..hi"""
        if not (self.contains(lo) and self.contains(hi)) or hi < lo:
            raise RangeError(f"[{lo}, {hi}] is not inside [{self.lo}, {self.hi}]")
        a, b = lo - self.lo, hi - self.lo + 1
        return ComplexMatrix(lo=lo, hi=hi, entries=self.entries[a:b, a:b])

    def dagger(self) -> "ComplexMatrix":
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=self.entries.conj().T)

    def _check_same_range(self, other: "ComplexMatrix") -> None:
        if (self.lo, self.hi) != (other.lo, other.hi):
            raise DimensionError(f"Index ranges differ: [{self.lo}, {self.hi}] vs "
                                 f"[{other.lo}, {other.hi}]")

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        self._check_same_range(other)
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=self.entries @ other.entries)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        self._check_same_range(other)
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=self.entries + other.entries)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        self._check_same_range(other)
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=self.entries - other.entries)

    def __neg__(self) -> "ComplexMatrix":
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=-self.entries)

    def __mul__(self, scalar: Scalar) -> "ComplexMatrix":
        return ComplexMatrix(lo=self.lo, hi=self.hi, entries=scalar * self.entries)

    __rmul__ = __mul__

    def max_abs_diff(self, other: "ComplexMatrix") -> float:
        self._check_same_range(other)
        return float(np.max(np.abs(self.entries - other.entries)))


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Coefficients c_k over basis indices lo..hi

    Normalization is explicit: construct, then call normalized().
    """
    lo: int
    hi: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.hi < self.lo:
            raise RangeError(f"Empty index range [{self.lo}, {self.hi}]")
        coefficients = _frozen(self.coefficients)
        if coefficients.shape != (self.hi - self.lo + 1,):
            raise DimensionError(f"Coefficient shape {coefficients.shape} does not match "
                                 f"range [{self.lo}, {self.hi}]")
        object.__setattr__(self, 'coefficients', coefficients)

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Scalar], lo: int) -> "StateVector":
        coefficients = np.asarray(list(coefficients), dtype=complex)
        return cls(lo=lo, hi=lo + coefficients.size - 1, coefficients=coefficients)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def coefficient(self, k: int) -> complex:
        if not self.lo <= k <= self.hi:
            return 0j
        return complex(self.coefficients[k - self.lo])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise ConfigurationError("Cannot normalize the zero vector")
        return StateVector(lo=self.lo, hi=self.hi, coefficients=self.coefficients / norm)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def padded(self, lo: int, hi: int) -> np.ndarray:
        """Coefficient array over the larger range lo..hi"""
        if lo > self.lo or hi < self.hi:
            raise DimensionError(f"State range [{self.lo}, {self.hi}] is not inside "
                                 f"[{lo}, {hi}]")
        vector = np.zeros(hi - lo + 1, dtype=complex)
        vector[self.lo - lo:self.hi - lo + 1] = self.coefficients
        return vector


def basis_state(k: int, lo: int, hi: int) -> StateVector:
    """Unit vector |k> over lo..hi"""
    if not lo <= k <= hi:
        raise RangeError(f"Basis index {k} outside [{lo}, {hi}]")
    coefficients = np.zeros(hi - lo + 1, dtype=complex)
    coefficients[k - lo] = 1.0
    return StateVector(lo=lo, hi=hi, coefficients=coefficients)


def identity_matrix(lo: int, hi: int) -> ComplexMatrix:
    return ComplexMatrix(lo=lo, hi=hi, entries=np.eye(hi - lo + 1, dtype=complex))


def diagonal_matrix(values: Iterable[Scalar], lo: int) -> ComplexMatrix:
    values = np.asarray(list(values), dtype=complex)
    return ComplexMatrix(lo=lo, hi=lo + values.size - 1, entries=np.diag(values))


def angular_momentum_matrix(N: int, hbar: float = 1.0) -> ComplexMatrix:
    """L^ truncated to |k>, -N <= k <= N: diag(hbar * k)"""
    return diagonal_matrix(hbar * np.arange(-N, N + 1), lo=-N)


def shift_matrix(n: int, N: int) -> ComplexMatrix:
    """
    Truncation of exp(i n Theta^): |k> -> |k+n> when both lie in [-N, N]

    Columns whose image leaves the range are zero.
    """
    dim = 2 * N + 1
    entries = np.zeros((dim, dim), dtype=complex)
    ks = np.arange(-N, N + 1)
    inside = np.abs(ks + n) <= N
    entries[ks[inside] + n + N, ks[inside] + N] = 1.0
    return ComplexMatrix(lo=-N, hi=N, entries=entries)


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return a @ b - b @ a


def hermiticity_defect(a: ComplexMatrix) -> float:
    """max over (j, k) of |A[j, k] - conj(A[k, j])|"""
    return float(np.max(np.abs(a.entries - a.entries.conj().T)))


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(a.entries))


def apply(a: ComplexMatrix, psi: StateVector) -> StateVector:
    """A|psi> over the index range of A"""
    vector = psi.padded(a.lo, a.hi)
    return StateVector(lo=a.lo, hi=a.hi, coefficients=a.entries @ vector)


def expectation(a: ComplexMatrix, psi: StateVector) -> complex:
    """<psi|A|psi>"""
    vector = psi.padded(a.lo, a.hi)
    return complex(np.vdot(vector, a.entries @ vector))


def spectral_norm_estimate(a: ComplexMatrix,
                           tol: float = 1e-10,
                           max_iter: int = 2000,
                           seed: int = 0,
                           logger: Optional[logging.Logger] = None) -> float:
    """
    Largest singular value by power iteration on A^dagger A

    Args:
        a: Matrix
        tol: Relative change of the estimate at which iteration stops
        max_iter: Iteration budget
        seed: Seed of the deterministic start vector
        logger: Logger instance

    Returns:
        Estimate of ||A||_2
    """
    logger = logger or logging.getLogger(__name__)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.dim) + 1j * rng.standard_normal(a.dim)
    v /= np.linalg.norm(v)

    entries = a.entries
    adjoint = entries.conj().T
    estimate = 0.0

    for iteration in range(1, max_iter + 1):
        w = entries @ v
        new_estimate = float(np.linalg.norm(w))
        if new_estimate == 0.0:
            return 0.0

        u = adjoint @ w
        v = u / np.linalg.norm(u)

        if abs(new_estimate - estimate) <= tol * new_estimate:
            logger.debug(f"Power iteration converged after {iteration} steps: {new_estimate:.12f}")
            return new_estimate
        estimate = new_estimate

    logger.warning(f"Power iteration did not reach relative tolerance {tol:g} "
                   f"in {max_iter} steps (estimate {estimate:.12f})")
    return estimate


def matrix_to_dict(a: ComplexMatrix) -> Dict:
    flat = a.entries.ravel()
    return {
        'lo': int(a.lo),
        'hi': int(a.hi),
        'entries': [[float(z.real), float(z.imag)] for z in flat],
    }


def read_fields(data: Dict, what: str, *keys: str) -> Dict:
    """
    Integer fields plus [re, im] pair lists from a parsed JSON document

    Keys ending in '*' hold pair lists and come back as complex arrays,
    the rest come back as ints. Missing keys, non-numeric values and
    pair lists that are ragged or not of width 2 raise ConfigurationError.
    """
    fields = {}
    try:
        for key in keys:
            if key.endswith('*'):
                name = key[:-1]
                pairs = np.asarray(data[name], dtype=float)
                if pairs.ndim != 2 or pairs.shape[1] != 2:
                    raise ValueError(f"'{name}' must be a list of [re, im] pairs, "
                                     f"got shape {pairs.shape}")
                fields[name] = pairs[:, 0] + 1j * pairs[:, 1]
            else:
                fields[key] = int(data[key])
    except KeyError as e:
        raise ConfigurationError(f"Invalid {what}: missing field {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid {what}: {e}") from e
    return fields


def matrix_from_dict(data: Dict) -> ComplexMatrix:
    fields = read_fields(data, 'matrix file', 'lo', 'hi', 'entries*')
    lo, hi, flat = fields['lo'], fields['hi'], fields['entries']
    dim = hi - lo + 1
    if dim < 1 or flat.size != dim * dim:
        raise DimensionError(f"Expected {max(dim, 0) ** 2} [re, im] pairs, got {flat.size}")
    return ComplexMatrix(lo=lo, hi=hi, entries=flat.reshape(dim, dim))


def state_to_dict(psi: StateVector) -> Dict:
    return {
        'lo': int(psi.lo),
        'hi': int(psi.hi),
        'coefficients': [[float(c.real), float(c.imag)] for c in psi.coefficients],
    }


def state_from_dict(data: Dict) -> StateVector:
    fields = read_fields(data, 'state file', 'lo', 'hi', 'coefficients*')
    return StateVector(lo=fields['lo'], hi=fields['hi'], coefficients=fields['coefficients'])


def save_matrix_json(a: ComplexMatrix, output_path: Union[str, Path]) -> None:
    write_json(matrix_to_dict(a), str(output_path))


def load_matrix_json(input_path: Union[str, Path]) -> ComplexMatrix:
    return matrix_from_dict(read_json(str(input_path)))


def matrix_to_frame(a: ComplexMatrix) -> pd.DataFrame:
    j, k = np.meshgrid(a.indices, a.indices, indexing='ij')
    return pd.DataFrame({
        'j': j.ravel(),
        'k': k.ravel(),
        're': a.entries.real.ravel(),
        'im': a.entries.imag.ravel(),
    })


def save_matrix_csv(a: ComplexMatrix, output_path: Union[str, Path]) -> None:
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    matrix_to_frame(a).to_csv(path, index=False, float_format='%.17g')
