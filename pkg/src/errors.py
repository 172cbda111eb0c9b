"""
Exception hierarchy for the cylquant framework

Value-type failures (bad ranges, bad names) derive from ValueError,
numerical failures from RuntimeError.
"""

from typing import Optional


class CylQuantError(Exception):
    """Base class for all framework errors"""


class DomainError(CylQuantError, ValueError):
    """Angle or interval outside [-pi, pi]"""


class RangeError(CylQuantError, ValueError):
    """Basis index outside the admissible truncation range"""


class DimensionError(CylQuantError, ValueError):
    """Index range of a state does not fit the index range of an operator"""


class ConfigurationError(CylQuantError, ValueError):
    """Unknown name or invalid numeric value in a job configuration"""


class QuadratureError(CylQuantError, RuntimeError):
    """
    Composite Gauss-Legendre rule did not reach the requested tolerance

    Attributes:
        residual: Difference between the last two panel-doubling estimates
        tolerance: Requested absolute tolerance
    """

    def __init__(self, message: str, residual: float, tolerance: Optional[float] = None):
        super().__init__(f"{message} (residual={residual:.3e}, tolerance={tolerance})")
        self.residual = residual
        self.tolerance = tolerance


class SamplingError(CylQuantError, RuntimeError):
    """Rejection sampling ran out of attempts before collecting enough states"""
