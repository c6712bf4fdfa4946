"""Closed forms built on the Cauchy transform of an ellipse indicator.

For E = E(a, b) with lam = (a - b)/(a + b) and c^2 = b^2 - a^2, the boundary
satisfies z-bar = lam*z + 2ab*h(z), where

    h(z) = 1 / (z + sqrt(z^2 + c^2))

is holomorphic off the focal segment with h(z) ~ 1/(2z) at infinity.  That
single function drives everything here: the Cauchy transform of the
indicator, its conjugate, a bounded primitive whose -dbar derivative gives
the z/z-bar^2 potential inside E, the interior gradient of the confined
potential as a linear form coef_z * z + coef_zbar * z-bar, the solving of
coef_z = coef_zbar = 0 for the equilibrium semi-axes, and the exterior
boundary limit of the Laplacian of the potential.

Branch choice for sqrt(z^2 + c^2): of the two candidates u = z +/- sqrt,
their product is -c^2, so exactly one has |u| > |c| off the focal segment;
picking the larger |u| selects the branch that decays like 1/(2z).  The two
candidates tie exactly on the focal segment, which is excluded by a small
guard tube.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .geometry import BoundaryPoint, Ellipse, Membership, PlanePoint, ellipse_contains
from .kernel import KernelParams

__all__ = [
    "TAU_BRANCH",
    "lambda_of",
    "h_function",
    "cauchy_transform_chi",
    "conj_cauchy_transform_chi",
    "primitive_F",
    "primitive_constant",
    "zbar2_potential_inside",
    "GradPCoefficients",
    "grad_P_coefficients",
    "candidate_axes",
    "boundary_laplacian_limit",
]

# exclusion tube around the focal segment; h is only used at points well
# outside E (or at conjugates of such points), so the tube catches misuse
TAU_BRANCH = 1e-10


def lambda_of(e: Ellipse) -> float:
    """lam = (a - b)/(a + b), the ellipse's shape parameter in (-1, 1)."""
    return e.lam


def _focal_segment_distance(e: Ellipse, z: complex) -> float:
    f = e.focal_half_length
    if e.focal_axis == "x":
        # segment [-f, f] on the real axis
        return math.hypot(max(abs(z.real) - f, 0.0), z.imag)
    # segment [-if, if] on the imaginary axis
    return math.hypot(z.real, max(abs(z.imag) - f, 0.0))


def _h(e: Ellipse, z: complex) -> complex:
    if _focal_segment_distance(e, z) <= TAU_BRANCH:
        raise ValueError(f"h is undefined on the focal segment (z = {z})")
    w = cmath.sqrt(z * z + complex(e.c2))
    u_plus = z + w
    u_minus = z - w
    u = u_plus if abs(u_plus) >= abs(u_minus) else u_minus
    return 1.0 / u


def h_function(e: Ellipse, z: PlanePoint) -> complex:
    """h(z) = 1/(z + sqrt(z^2 + c^2)) on the branch decaying like 1/(2z)."""
    return _h(e, z.as_complex)


def _resolve_side(e: Ellipse, z: PlanePoint, side: str) -> str:
    if side == "auto":
        m = ellipse_contains(e, z)
        return "outside" if m is Membership.EXTERIOR else "inside"
    if side not in ("inside", "outside"):
        raise ValueError(f"side must be 'auto', 'inside' or 'outside', got {side!r}")
    return side


def cauchy_transform_chi(e: Ellipse, z: PlanePoint, side: str = "auto") -> complex:
    """((1/(pi z)) * chi_E)(z): z-bar - lam*z inside E, 2ab*h(z) outside.

    Continuous across the boundary; `side` forces a branch there (used by
    the continuity tests), boundary points default to the inside branch.
    """
    zc = z.as_complex
    if _resolve_side(e, z, side) == "inside":
        return zc.conjugate() - e.lam * zc
    return 2.0 * e.a * e.b * _h(e, zc)


def conj_cauchy_transform_chi(e: Ellipse, z: PlanePoint, side: str = "auto") -> complex:
    """((1/(pi z-bar)) * chi_E)(z): z - lam*z-bar inside E, 2ab*h(z-bar) outside.

    Equals both cauchy_transform_chi evaluated at z-bar and the complex
    conjugate of cauchy_transform_chi at z.
    """
    zc = z.as_complex
    if _resolve_side(e, z, side) == "inside":
        return zc - e.lam * zc.conjugate()
    return 2.0 * e.a * e.b * _h(e, zc.conjugate())


def primitive_F(e: Ellipse, z: PlanePoint, side: str = "auto") -> complex:
    """Bounded z-primitive of conj_cauchy_transform_chi, normalised to drop
    the additive constant lam*a*b (see primitive_constant).

    Inside: (1/2)(z - lam*z-bar)^2.  Outside: 2ab*h(z-bar)*H(z) +
    (1/2)(2ab*h(z-bar))^2 with H(z) = z - lam*z-bar - 2ab*h(z-bar).  The two
    branches agree on the boundary because H vanishes there.
    """
    zc = z.as_complex
    if _resolve_side(e, z, side) == "inside":
        w = zc - e.lam * zc.conjugate()
        return 0.5 * w * w
    hb = 2.0 * e.a * e.b * _h(e, zc.conjugate())
    big_h = zc - e.lam * zc.conjugate() - hb
    return hb * big_h + 0.5 * hb * hb


def primitive_constant(e: Ellipse) -> float:
    """The constant lam*a*b separating primitive_F from (1/pi)(z/z-bar * chi_E)."""
    return e.lam * e.a * e.b


def zbar2_potential_inside(e: Ellipse, z: PlanePoint) -> complex:
    """((1/pi)(z/z-bar^2) * chi_E)(z) = lam (z - lam*z-bar) for z interior to E.

    Only the interior value is ever needed; the exterior closed form exists
    but is deliberately not implemented (the exterior certification goes
    through the Laplacian route instead).
    """
    if ellipse_contains(e, z) is not Membership.INTERIOR:
        raise ValueError(f"z = ({z.x}, {z.y}) is not interior to E({e.a}, {e.b})")
    zc = z.as_complex
    return e.lam * (zc - e.lam * zc.conjugate())


@dataclass(frozen=True)
class GradPCoefficients:
    """Interior gradient of the confined potential as the linear form
    grad P(z) = coef_z * z + coef_zbar * z-bar on E."""

    coef_z: float
    coef_zbar: float

    def as_tuple(self) -> tuple:
        return (self.coef_z, self.coef_zbar)


def grad_P_coefficients(p: KernelParams, e: Ellipse) -> GradPCoefficients:
    """Coefficients of the interior gradient of W_alpha * (chi_E/|E|) + |z|^2/2.

    coef_z = (1/ab)(-1 - alpha*lam) + 1,
    coef_zbar = (1/ab)(lam + alpha/2 + (alpha/2) lam^2).
    Both vanish exactly at the equilibrium semi-axes.
    """
    ab = e.a * e.b
    lam = e.lam
    coef_z = (-1.0 - p.alpha * lam) / ab + 1.0
    coef_zbar = (lam + 0.5 * p.alpha + 0.5 * p.alpha * lam * lam) / ab
    return GradPCoefficients(coef_z, coef_zbar)


def candidate_axes(p: KernelParams) -> Ellipse:
    """Solve { ab = 1 + alpha*lam ; alpha*lam^2 + 2 lam + alpha = 0 } for the
    ellipse that makes the interior gradient vanish.

    The root with |lam| < 1 is lam = -alpha / (1 + sqrt(1 - alpha^2)), the
    numerically stable rationalised form; the solution reduces to
    (a, b) = (sqrt(1 - alpha), sqrt(1 + alpha)).
    """
    alpha = p.alpha
    if abs(alpha) >= 1.0:
        raise ValueError(f"candidate ellipse degenerates for |alpha| >= 1 (alpha = {alpha})")
    lam = -alpha / (1.0 + math.sqrt(1.0 - alpha * alpha))
    ab = 1.0 + alpha * lam
    ratio = (1.0 + lam) / (1.0 - lam)  # a/b
    a = math.sqrt(ab * ratio)
    b = math.sqrt(ab / ratio)
    return Ellipse(a, b)


def boundary_laplacian_limit(p: KernelParams, e: Ellipse, bp: BoundaryPoint) -> float:
    """Exterior boundary limit of the Laplacian of the confined potential:

        (2/ab) * (1 + alpha * Re(tau^2)),

    with tau the unit tangent read as a complex number.  Re(tau^2) is
    insensitive to the tangent's orientation, and the sign in front of alpha
    is pinned three independent ways: the identity
    4 Re h'(z) = (2/ab)(Re tau^2 - lam) on the boundary, finite-difference
    Laplacians of the quadrature potential, and the requirement that the
    interior Laplacian vanish at the equilibrium axes.  The minimum over the
    boundary is (2/ab)(1 - |alpha|), attained at the axis points.
    """
    tau = bp.tangent.as_complex
    return (2.0 / (e.a * e.b)) * (1.0 + p.alpha * (tau * tau).real)
