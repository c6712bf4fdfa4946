"""Equilibrium measures of the anisotropic logarithmic energy.

The energy pairs a log repulsion with the angular anisotropy
alpha * x^2/|z|^2 and a quadratic confinement; for |alpha| < 1 its unique
minimiser is the uniform measure on the ellipse with semi-axes
(sqrt(1 - alpha), sqrt(1 + alpha)).  This package carries the closed forms
behind that statement, independent quadrature oracles, an N-particle
descent, and a certification suite exposed both as a library and through
the `ellipselaw` command-line tool.
"""

from .geometry import (
    BoundaryPoint,
    Ellipse,
    Membership,
    ParticleConfig,
    PlanePoint,
    boundary_point,
    ellipse_contains,
    sample_ellipse_uniform,
)
from .kernel import (
    KernelParams,
    confinement_potential,
    fourier_density,
    kernel_gradient,
    kernel_value,
)
from .analytic import (
    GradPCoefficients,
    boundary_laplacian_limit,
    candidate_axes,
    cauchy_transform_chi,
    conj_cauchy_transform_chi,
    grad_P_coefficients,
    h_function,
    lambda_of,
    primitive_F,
    primitive_constant,
    zbar2_potential_inside,
)
from .numerics import (
    C0_of,
    CurveDiscretization,
    FourierIdentityReport,
    FrequencyBox,
    GridMeasure,
    QuadratureConvergenceError,
    cauchy_integral,
    fourier_energy_identity_check,
    plemelj_jump,
    plemelj_jump_extrapolated,
    potential_grid_measure,
    potential_on_ellipse_measure,
)
from .solver import (
    EmpiricalStats,
    SolveParams,
    SolveResult,
    discrete_energy,
    discrete_gradient,
    empirical_stats,
    minimize,
    y_marginal_vs_semicircle,
)
from .verify import VerificationReport, run_check

__version__ = "0.1.0"
