import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipselaw.geometry import PlanePoint
from ellipselaw.kernel import (
    KernelParams,
    confinement_potential,
    fourier_density,
    kernel_gradient,
    kernel_value,
)

alphas = st.floats(min_value=-0.99, max_value=0.99, allow_nan=False)
coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def test_kernel_params_validation():
    with pytest.raises(ValueError):
        KernelParams(math.nan)
    assert not KernelParams(0.5).outside_theorem_range
    assert KernelParams(1.0).outside_theorem_range
    assert KernelParams(-1.5).outside_theorem_range


def test_kernel_value_examples():
    assert kernel_value(KernelParams(0.5), PlanePoint(1, 0)) == pytest.approx(0.5)
    assert kernel_value(KernelParams(0.77), PlanePoint(0, 1)) == pytest.approx(0.0)
    assert kernel_value(KernelParams(1.0), PlanePoint(math.e, 0)) == pytest.approx(0.0)


def test_kernel_singularity_raises():
    with pytest.raises(ValueError):
        kernel_value(KernelParams(0.0), PlanePoint(0, 0))
    with pytest.raises(ValueError):
        kernel_gradient(KernelParams(0.0), PlanePoint(0, 0))


@given(alpha=alphas, x=coords, y=coords)
def test_kernel_evenness_and_axis_symmetry(alpha, x, y):
    if x * x + y * y < 1e-6:
        return
    p = KernelParams(alpha)
    v = kernel_value(p, PlanePoint(x, y))
    assert kernel_value(p, PlanePoint(-x, -y)) == pytest.approx(v, rel=1e-14, abs=1e-14)
    assert kernel_value(p, PlanePoint(x, -y)) == pytest.approx(v, rel=1e-14, abs=1e-14)


def test_gradient_log_part_examples():
    p = KernelParams(0.0)
    g = kernel_gradient(p, PlanePoint(1, 0))
    assert (g.x, g.y) == pytest.approx((-1.0, 0.0))
    g = kernel_gradient(p, PlanePoint(0, 2))
    assert (g.x, g.y) == pytest.approx((0.0, -0.5))


@given(alpha=alphas, x=coords, y=coords)
def test_gradient_matches_complex_form(alpha, x, y):
    if math.hypot(x, y) < 1e-3:
        return
    p = KernelParams(alpha)
    g = kernel_gradient(p, PlanePoint(x, y))
    z = complex(x, y)
    expected = -1.0 / z.conjugate() + 0.5 * alpha * (1.0 / z - z / z.conjugate() ** 2)
    assert g.x == pytest.approx(expected.real, rel=1e-12, abs=1e-12)
    assert g.y == pytest.approx(expected.imag, rel=1e-12, abs=1e-12)


@settings(max_examples=100)
@given(alpha=alphas, x=coords, y=coords)
def test_gradient_matches_finite_differences(alpha, x, y):
    if math.hypot(x, y) < 1e-3:
        return
    p = KernelParams(alpha)
    g = kernel_gradient(p, PlanePoint(x, y))
    h = 1e-6 * max(1.0, math.hypot(x, y))
    fx = (kernel_value(p, PlanePoint(x + h, y)) - kernel_value(p, PlanePoint(x - h, y))) / (2 * h)
    fy = (kernel_value(p, PlanePoint(x, y + h)) - kernel_value(p, PlanePoint(x, y - h))) / (2 * h)
    scale = max(1.0, abs(g.x), abs(g.y))
    assert abs(g.x - fx) / scale < 1e-6
    assert abs(g.y - fy) / scale < 1e-6


def test_confinement_values():
    assert confinement_potential(PlanePoint(0, 0)) == 0.0
    assert confinement_potential(PlanePoint(1, 1)) == pytest.approx(1.0)
    assert confinement_potential(PlanePoint(3, 4)) == pytest.approx(12.5)


def test_fourier_density_examples():
    assert fourier_density(KernelParams(0.0), PlanePoint(1, 0)) == pytest.approx(2 * math.pi)
    assert fourier_density(KernelParams(0.5), PlanePoint(1, 0)) == pytest.approx(math.pi)
    assert fourier_density(KernelParams(0.5), PlanePoint(0, 1)) == pytest.approx(3 * math.pi)
    with pytest.raises(ValueError):
        fourier_density(KernelParams(0.5), PlanePoint(0, 0))


@given(
    alpha=st.floats(min_value=-1.0, max_value=1.0),
    x=coords,
    y=coords,
    s=st.floats(min_value=1e-3, max_value=1e3),
)
def test_fourier_density_nonnegative_and_homogeneous(alpha, x, y, s):
    if x * x + y * y < 1e-12:
        return
    p = KernelParams(alpha)
    d = fourier_density(p, PlanePoint(x, y))
    assert d >= 0.0
    scaled = fourier_density(p, PlanePoint(s * x, s * y))
    assert scaled * s * s == pytest.approx(d, rel=1e-9)
