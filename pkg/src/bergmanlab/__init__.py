"""Numerical experiments on Toeplitz and Hankel operators over Bergman spaces of convex Reinhardt domains in C^2."""

__version__ = "0.1.0"

from .berezin import (
    KernelTruncation,
    PathSpec,
    TruncationError,
    berezin_hankel_sq_qh,
    berezin_of_function,
    berezin_scan,
    berezin_toeplitz_qh,
    bergman_kernel,
)
from .domain import DomainError, PreconditionError, ReinhardtDomain2D, ball, bidisc, trapezoid_hull, hull, polydisc
from .harmonic import cesaro_mean, project_QJ, torus_average_hankel_identity
from .moments import hankel_eigenvalue, monomial_norm_sq, radial_weight, spectrum_table, toeplitz_weight
from .quadrature import QuadratureSpec
from .symbols import QuasiHomogeneousSymbol, SampledSymbol, conj_z2, constant, quasi_homogeneous, sampled, z1, z2
from .tauberian import CoefficientSequence, abel_value, cesaro_ratio, tauberian_report
from .verify import (
    VerdictReport,
    verify_cesaro_reduction,
    verify_edge_limit,
    verify_moment_ratio,
    verify_hankel_dichotomy,
    verify_toeplitz_dichotomy,
)
