import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipselaw.analytic import (
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
from ellipselaw.geometry import Ellipse, PlanePoint, boundary_point
from ellipselaw.kernel import KernelParams

alphas = st.floats(min_value=-0.99, max_value=0.99, allow_nan=False)


# ---------------------------------------------------------------------------
# lambda


def test_lambda_values():
    assert lambda_of(Ellipse(1, 1)) == 0.0
    assert lambda_of(Ellipse(2, 1)) == pytest.approx(1.0 / 3.0)


def test_lambda_candidate_is_quadratic_root():
    alpha = 0.5
    e = candidate_axes(KernelParams(alpha))
    lam = lambda_of(e)
    assert lam == pytest.approx(-0.2679492, abs=1e-7)
    assert abs(lam) < 1.0
    assert alpha * lam * lam + 2.0 * lam + alpha == pytest.approx(0.0, abs=1e-14)


# ---------------------------------------------------------------------------
# h


def test_h_disk_case():
    assert h_function(Ellipse(1, 1), PlanePoint(2, 0)) == pytest.approx(0.25)


def test_h_real_axis_beyond_focus():
    # c^2 = -3, sqrt(4 - 3) = +1 on the branch decaying at infinity
    assert h_function(Ellipse(2, 1), PlanePoint(2, 0)) == pytest.approx(1.0 / 3.0)


def test_h_rejects_focal_segment():
    e = Ellipse(2, 1)  # foci at (+-sqrt(3), 0)
    with pytest.raises(ValueError):
        h_function(e, PlanePoint(1.0, 0.0))
    e2 = Ellipse(1, 2)  # foci at (0, +-sqrt(3))
    with pytest.raises(ValueError):
        h_function(e2, PlanePoint(0.0, 1.5))


@pytest.mark.parametrize("radius", [1e2, 1e3, 1e4])
@pytest.mark.parametrize("angle", [0.3, 2.0, -1.2, 3.0])
def test_h_asymptotics(radius, angle):
    # h(z) - 1/(2z) = -c^2/(8 z^3) + O(z^-5)
    e = Ellipse(2, 1)
    z = PlanePoint(radius * math.cos(angle), radius * math.sin(angle))
    diff = abs(h_function(e, z) - 1.0 / (2.0 * z.as_complex))
    ratio = diff * radius**3 / abs(e.c2)
    assert 0.05 < ratio < 0.25


@given(
    a=st.floats(min_value=0.3, max_value=3.0),
    b=st.floats(min_value=0.3, max_value=3.0),
    t=st.floats(min_value=0.0, max_value=2.0 * math.pi),
)
def test_h_satisfies_boundary_identity(a, b, t):
    # on the boundary, z-bar = lam z + 2ab h(z)
    e = Ellipse(a, b)
    z = boundary_point(e, t).point
    if abs(e.c2) > 1e-12 and abs(z.as_complex) < e.focal_half_length + 1e-6:
        return  # boundary can graze the focal guard tube only for thin ellipses
    lhs = z.as_complex.conjugate()
    rhs = e.lam * z.as_complex + 2 * e.a * e.b * h_function(e, z)
    assert abs(lhs - rhs) < 1e-10


# ---------------------------------------------------------------------------
# Cauchy transform and relatives


def test_cauchy_disk_interior():
    v = cauchy_transform_chi(Ellipse(1, 1), PlanePoint(0.3, 0.4))
    assert v == pytest.approx(complex(0.3, -0.4))


def test_cauchy_disk_exterior_is_one_over_z():
    v = cauchy_transform_chi(Ellipse(1, 1), PlanePoint(2, 0))
    assert v == pytest.approx(0.5)


def test_cauchy_disk_exterior_polar_oracle():
    # brute 2-D quadrature of 1/(pi(z-w)) over the unit disk
    e = Ellipse(1, 1)
    z = complex(1.7, 0.9)
    nr, nt = 400, 400
    r = (np.arange(nr) + 0.5) / nr
    t = (np.arange(nt) + 0.5) * 2 * math.pi / nt
    R, T = np.meshgrid(r, t, indexing="ij")
    W = R * np.exp(1j * T)
    integrand = 1.0 / (math.pi * (z - W))
    val = np.sum(integrand * R) * (1.0 / nr) * (2 * math.pi / nt)
    assert abs(cauchy_transform_chi(e, PlanePoint(z.real, z.imag)) - val) < 1e-5


def test_cauchy_boundary_continuity_example():
    e = Ellipse(2, 1)
    z = PlanePoint(2, 0)
    inside = cauchy_transform_chi(e, z, side="inside")
    outside = cauchy_transform_chi(e, z, side="outside")
    assert inside == pytest.approx(4.0 / 3.0)
    assert outside == pytest.approx(4.0 / 3.0)


def test_conj_cauchy_disk_interior():
    v = conj_cauchy_transform_chi(Ellipse(1, 1), PlanePoint(0.3, 0.4))
    assert v == pytest.approx(complex(0.3, 0.4))


def test_conj_cauchy_exterior_example():
    e = Ellipse(2, 1)
    v = conj_cauchy_transform_chi(e, PlanePoint(0, 3))
    expected = 4.0 * h_function(e, PlanePoint(0, -3))
    assert v == pytest.approx(expected)


@given(
    a=st.floats(min_value=0.4, max_value=2.5),
    b=st.floats(min_value=0.4, max_value=2.5),
    x=st.floats(min_value=-4.0, max_value=4.0),
    y=st.floats(min_value=-4.0, max_value=4.0),
)
def test_conj_cauchy_identities(a, b, x, y):
    # conj_cauchy(z) = cauchy(z-bar) = conj(cauchy(z))
    e = Ellipse(a, b)
    z = PlanePoint(x, y)
    if abs(e.quadratic_form(z) - 1.0) < 1e-9:
        return
    v = conj_cauchy_transform_chi(e, z)
    assert abs(v - cauchy_transform_chi(e, PlanePoint(x, -y))) < 1e-12
    assert abs(v - cauchy_transform_chi(e, z).conjugate()) < 1e-12


@pytest.mark.parametrize("ellipse", [Ellipse(2, 1), Ellipse(0.8, 1.7), Ellipse(1.3, 1.3)])
def test_transform_continuity_across_boundary(ellipse):
    for k in range(256):
        t = 2 * math.pi * k / 256
        z = boundary_point(ellipse, t).point
        for fn in (cauchy_transform_chi, conj_cauchy_transform_chi, primitive_F):
            inside = fn(ellipse, z, side="inside")
            outside = fn(ellipse, z, side="outside")
            assert abs(inside - outside) < 1e-10, (fn.__name__, t)


# ---------------------------------------------------------------------------
# primitive and the z/z-bar^2 potential


def test_primitive_disk_interior():
    assert primitive_F(Ellipse(1, 1), PlanePoint(0.5, 0)) == pytest.approx(0.125)


def test_primitive_boundary_continuity_example():
    e = Ellipse(2, 1)
    z = PlanePoint(2, 0)
    assert primitive_F(e, z, side="inside") == pytest.approx(8.0 / 9.0)
    assert primitive_F(e, z, side="outside") == pytest.approx(8.0 / 9.0)


def test_primitive_constant_value():
    e = Ellipse(2, 1)
    assert primitive_constant(e) == pytest.approx(2.0 / 3.0)


def _dbar_fd(fn, z, h=1e-6):
    fx = (fn(complex(z.real + h, z.imag)) - fn(complex(z.real - h, z.imag))) / (2 * h)
    fy = (fn(complex(z.real, z.imag + h)) - fn(complex(z.real, z.imag - h))) / (2 * h)
    return 0.5 * (fx + 1j * fy)


def _d_fd(fn, z, h=1e-6):
    fx = (fn(complex(z.real + h, z.imag)) - fn(complex(z.real - h, z.imag))) / (2 * h)
    fy = (fn(complex(z.real, z.imag + h)) - fn(complex(z.real, z.imag - h))) / (2 * h)
    return 0.5 * (fx - 1j * fy)


@pytest.mark.parametrize(
    "zc,side",
    [
        (complex(0.8, 0.2), "inside"),
        (complex(-0.5, -0.35), "inside"),
        (complex(2.6, 0.7), "outside"),
        (complex(0.3, 1.8), "outside"),
    ],
)
def test_primitive_derivatives(zc, side):
    e = Ellipse(2, 1)

    def F(w):
        return primitive_F(e, PlanePoint(w.real, w.imag), side=side)

    # dF/dz reproduces the conjugate Cauchy transform everywhere
    d = _d_fd(F, zc)
    expected = conj_cauchy_transform_chi(e, PlanePoint(zc.real, zc.imag), side=side)
    assert abs(d - expected) / max(1.0, abs(expected)) < 1e-5
    if side == "inside":
        # -dbar F reproduces the z/z-bar^2 potential inside
        db = _dbar_fd(F, zc)
        expected2 = zbar2_potential_inside(e, PlanePoint(zc.real, zc.imag))
        assert abs(-db - expected2) / max(1.0, abs(expected2)) < 1e-5


def test_zbar2_disk_is_zero():
    assert zbar2_potential_inside(Ellipse(1, 1), PlanePoint(0.4, 0.3)) == 0.0


def test_zbar2_hand_value():
    v = zbar2_potential_inside(Ellipse(2, 1), PlanePoint(1, 0))
    assert v == pytest.approx(2.0 / 9.0)


def test_zbar2_requires_interior():
    with pytest.raises(ValueError):
        zbar2_potential_inside(Ellipse(2, 1), PlanePoint(3, 0))
    with pytest.raises(ValueError):
        zbar2_potential_inside(Ellipse(2, 1), PlanePoint(2, 0))


# ---------------------------------------------------------------------------
# gradient coefficients and the equilibrium axes


def test_grad_coefficients_disk_alpha_zero():
    g = grad_P_coefficients(KernelParams(0.0), Ellipse(1, 1))
    assert g.as_tuple() == pytest.approx((0.0, 0.0))


def test_grad_coefficients_disk_alpha_half():
    g = grad_P_coefficients(KernelParams(0.5), Ellipse(1, 1))
    assert g.coef_z == pytest.approx(0.0)
    assert g.coef_zbar == pytest.approx(0.25)


def test_grad_coefficients_vanish_at_candidate():
    g = grad_P_coefficients(KernelParams(0.5), Ellipse(math.sqrt(0.5), math.sqrt(1.5)))
    assert abs(g.coef_z) < 1e-14
    assert abs(g.coef_zbar) < 1e-14


def test_candidate_axes_values():
    assert candidate_axes(KernelParams(0.0)).a == pytest.approx(1.0, abs=1e-15)
    e = candidate_axes(KernelParams(0.5))
    assert e.a == pytest.approx(math.sqrt(0.5), abs=1e-14)
    assert e.b == pytest.approx(math.sqrt(1.5), abs=1e-14)
    em = candidate_axes(KernelParams(-0.5))
    assert em.a == pytest.approx(math.sqrt(1.5), abs=1e-14)
    assert em.b == pytest.approx(math.sqrt(0.5), abs=1e-14)


def test_candidate_axes_degenerate():
    with pytest.raises(ValueError):
        candidate_axes(KernelParams(1.0))
    with pytest.raises(ValueError):
        candidate_axes(KernelParams(-1.2))


@settings(max_examples=100)
@given(alpha=alphas)
def test_candidate_identities_and_argmin(alpha):
    p = KernelParams(alpha)
    e = candidate_axes(p)
    assert e.a * e.a + e.b * e.b == pytest.approx(2.0, abs=1e-14)
    assert e.b * e.b - e.a * e.a == pytest.approx(2.0 * alpha, abs=1e-14)
    g = grad_P_coefficients(p, e)
    assert abs(g.coef_z) < 1e-14
    assert abs(g.coef_zbar) < 1e-14


@given(alpha=alphas)
def test_candidate_swap_duality(alpha):
    e = candidate_axes(KernelParams(alpha))
    em = candidate_axes(KernelParams(-alpha))
    assert em.a == pytest.approx(e.b, abs=1e-15)
    assert em.b == pytest.approx(e.a, abs=1e-15)


# ---------------------------------------------------------------------------
# boundary Laplacian limit


def test_boundary_laplacian_axis_values():
    p = KernelParams(0.5)
    e = candidate_axes(p)
    ab = e.a * e.b
    # horizontal vertex: tangent +-i, Re tau^2 = -1
    v = boundary_laplacian_limit(p, e, boundary_point(e, 0.0))
    assert v == pytest.approx((2.0 / ab) * (1.0 - 0.5))
    # vertical vertex: tangent +-1, Re tau^2 = 1
    v = boundary_laplacian_limit(p, e, boundary_point(e, math.pi / 2))
    assert v == pytest.approx((2.0 / ab) * (1.0 + 0.5))


def test_boundary_laplacian_disk_alpha_zero():
    p = KernelParams(0.0)
    e = Ellipse(1, 1)
    for t in np.linspace(0, 2 * math.pi, 17):
        assert boundary_laplacian_limit(p, e, boundary_point(e, t)) == pytest.approx(2.0)


@settings(max_examples=60)
@given(alpha=alphas, t=st.floats(min_value=0.0, max_value=2.0 * math.pi))
def test_boundary_laplacian_lower_bound(alpha, t):
    p = KernelParams(alpha)
    e = candidate_axes(p)
    v = boundary_laplacian_limit(p, e, boundary_point(e, t))
    floor = (2.0 / (e.a * e.b)) * (1.0 - abs(alpha))
    assert v >= floor - 1e-12


@given(alpha=alphas)
def test_boundary_laplacian_minimum_at_axis(alpha):
    p = KernelParams(alpha)
    e = candidate_axes(p)
    floor = (2.0 / (e.a * e.b)) * (1.0 - abs(alpha))
    values = [
        boundary_laplacian_limit(p, e, boundary_point(e, t))
        for t in np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    ]
    assert min(values) >= floor - 1e-12
    axis_t = 0.0 if alpha >= 0 else math.pi / 2
    at_axis = boundary_laplacian_limit(p, e, boundary_point(e, axis_t))
    assert at_axis == pytest.approx(floor, abs=1e-12)
