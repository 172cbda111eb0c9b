"""
cylquant: Generalized Weyl Quantization on the Cylinder
Main package initialization
"""

__version__ = "1.0.0"

from .errors import (CylQuantError, DomainError, RangeError, DimensionError,
                     ConfigurationError, QuadratureError, SamplingError)
from .quadrature import GaussLegendreQuadrature, QuadratureConfig
from .kernel import (KernelSpec, WEYL_KERNEL, SYMMETRIC_KERNEL, get_kernel,
                     kernel_moment, validate_kernel)
from .observable import ClassicalObservable, make_builtin, fourier_coefficient
from .operators import ComplexMatrix, StateVector
from .quantizer import WeylQuantizer, QuantizerConfig
from .angle import (angle_operator, angle_limit_element, dirichlet_kernel,
                    AngleOperatorReport)
from .phase import (NumberStateVector, PhaseDistribution, embed, naimark_compress,
                    gw_phase_matrix, pb_phase_state, pb_phase_matrix, pov_probability,
                    phase_expectation, number_state_phase_variance)
from .uncertainty import (UncertaintyReport, circle_dispersions, boundary_amplitude,
                          check_theta_l_uncertainty, conjecture_phase_number_experiment)

__all__ = [
    "CylQuantError",
    "DomainError",
    "RangeError",
    "DimensionError",
    "ConfigurationError",
    "QuadratureError",
    "SamplingError",
    "GaussLegendreQuadrature",
    "QuadratureConfig",
    "KernelSpec",
    "WEYL_KERNEL",
    "SYMMETRIC_KERNEL",
    "get_kernel",
    "kernel_moment",
    "validate_kernel",
    "ClassicalObservable",
    "make_builtin",
    "fourier_coefficient",
    "ComplexMatrix",
    "StateVector",
    "WeylQuantizer",
    "QuantizerConfig",
    "angle_operator",
    "angle_limit_element",
    "dirichlet_kernel",
    "AngleOperatorReport",
    "NumberStateVector",
    "PhaseDistribution",
    "embed",
    "naimark_compress",
    "gw_phase_matrix",
    "pb_phase_state",
    "pb_phase_matrix",
    "pov_probability",
    "phase_expectation",
    "number_state_phase_variance",
    "UncertaintyReport",
    "circle_dispersions",
    "boundary_amplitude",
    "check_theta_l_uncertainty",
    "conjecture_phase_number_experiment",
]
