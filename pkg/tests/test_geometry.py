import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipselaw.geometry import (
    Ellipse,
    Membership,
    ParticleConfig,
    PlanePoint,
    boundary_point,
    ellipse_contains,
    sample_ellipse_uniform,
)

finite_coord = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)
axis = st.floats(min_value=0.2, max_value=5.0, allow_nan=False)


def test_plane_point_rejects_non_finite():
    with pytest.raises(ValueError):
        PlanePoint(math.nan, 0.0)
    with pytest.raises(ValueError):
        PlanePoint(0.0, math.inf)


def test_ellipse_validation_and_derived():
    e = Ellipse(2.0, 1.0)
    assert e.lam == pytest.approx(1.0 / 3.0)
    assert e.c2 == pytest.approx(-3.0)
    assert e.area == pytest.approx(2.0 * math.pi)
    assert e.focal_axis == "x"
    assert Ellipse(1.0, 2.0).focal_axis == "y"
    with pytest.raises(ValueError):
        Ellipse(0.0, 1.0)
    with pytest.raises(ValueError):
        Ellipse(1.0, -2.0)


def test_contains_disk_center_interior():
    assert ellipse_contains(Ellipse(1, 1), PlanePoint(0, 0)) is Membership.INTERIOR


def test_contains_disk_axis_boundary():
    assert ellipse_contains(Ellipse(1, 1), PlanePoint(1, 0)) is Membership.BOUNDARY


def test_contains_candidate_exterior():
    # q = 1/0.5 + 1/1.5 = 8/3 > 1
    e = Ellipse(math.sqrt(0.5), math.sqrt(1.5))
    assert ellipse_contains(e, PlanePoint(1, 1)) is Membership.EXTERIOR


@given(a=axis, b=axis, x=finite_coord, y=finite_coord)
def test_contains_symmetry(a, b, x, y):
    e = Ellipse(a, b)
    ref = ellipse_contains(e, PlanePoint(x, y))
    for sx, sy in ((-1, 1), (1, -1), (-1, -1)):
        assert ellipse_contains(e, PlanePoint(sx * x, sy * y)) is ref


def test_boundary_point_axis_frames():
    bp = boundary_point(Ellipse(1, 1), 0.0)
    assert (bp.point.x, bp.point.y) == pytest.approx((1.0, 0.0))
    assert (bp.tangent.x, bp.tangent.y) == pytest.approx((0.0, 1.0))
    assert (bp.normal.x, bp.normal.y) == pytest.approx((1.0, 0.0))

    bp = boundary_point(Ellipse(2, 1), 0.0)
    assert (bp.point.x, bp.point.y) == pytest.approx((2.0, 0.0))
    assert (bp.tangent.x, bp.tangent.y) == pytest.approx((0.0, 1.0))
    assert (bp.normal.x, bp.normal.y) == pytest.approx((1.0, 0.0))

    bp = boundary_point(Ellipse(2, 1), math.pi / 2)
    assert (bp.point.x, bp.point.y) == pytest.approx((0.0, 1.0))
    assert (bp.tangent.x, bp.tangent.y) == pytest.approx((-1.0, 0.0))
    assert (bp.normal.x, bp.normal.y) == pytest.approx((0.0, 1.0))


@given(a=axis, b=axis, t=st.floats(min_value=-10.0, max_value=10.0))
def test_boundary_point_frame_invariants(a, b, t):
    e = Ellipse(a, b)
    bp = boundary_point(e, t)
    assert e.quadratic_form(bp.point) == pytest.approx(1.0, abs=1e-12)
    assert abs(bp.tangent) == pytest.approx(1.0, abs=1e-12)
    assert abs(bp.normal) == pytest.approx(1.0, abs=1e-12)
    assert abs(bp.tangent.dot(bp.normal)) < 1e-12
    # normal points outward: a small step along it leaves the closed ellipse
    probe = PlanePoint(bp.point.x + 1e-6 * bp.normal.x, bp.point.y + 1e-6 * bp.normal.y)
    assert e.quadratic_form(probe) > 1.0


def test_particle_config_validation():
    with pytest.raises(ValueError):
        ParticleConfig(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        ParticleConfig(np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError):
        ParticleConfig(np.zeros((3, 3)))
    c = ParticleConfig(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert len(c) == 2
    assert not c.xy.flags.writeable


def test_sample_requires_positive_count():
    with pytest.raises(ValueError):
        sample_ellipse_uniform(Ellipse(1, 1), 0, seed=0)


def test_sample_is_deterministic_per_seed():
    e = Ellipse(1.5, 0.5)
    c1 = sample_ellipse_uniform(e, 100, seed=3)
    c2 = sample_ellipse_uniform(e, 100, seed=3)
    c3 = sample_ellipse_uniform(e, 100, seed=4)
    assert np.array_equal(c1.xy, c2.xy)
    assert not np.array_equal(c1.xy, c3.xy)


def test_sample_disk_mean_and_second_moment():
    c = sample_ellipse_uniform(Ellipse(1, 1), 100_000, seed=0)
    assert abs(c.xy[:, 0].mean()) < 0.02
    assert abs(c.xy[:, 1].mean()) < 0.02
    # E[x^2] over the uniform unit disk is 1/4
    assert np.mean(c.xy[:, 0] ** 2) == pytest.approx(0.25, abs=0.01)


def test_sample_candidate_second_moments():
    e = Ellipse(math.sqrt(0.5), math.sqrt(1.5))
    c = sample_ellipse_uniform(e, 100_000, seed=1)
    assert np.mean(c.xy[:, 0] ** 2) == pytest.approx(0.125, abs=0.01)
    assert np.mean(c.xy[:, 1] ** 2) == pytest.approx(0.375, abs=0.01)


def test_sample_points_lie_inside():
    e = Ellipse(0.7, 1.9)
    c = sample_ellipse_uniform(e, 5000, seed=2)
    q = (c.xy[:, 0] / e.a) ** 2 + (c.xy[:, 1] / e.b) ** 2
    assert np.all(q <= 1.0 + 1e-12)


def test_sample_moment_error_shrinks_with_n():
    e = Ellipse(1.0, 2.0)
    target = e.a * e.a / 4.0

    def mean_abs_err(n):
        errs = [
            abs(np.mean(sample_ellipse_uniform(e, n, seed=s).xy[:, 0] ** 2) - target)
            for s in range(10)
        ]
        return float(np.mean(errs))

    assert mean_abs_err(20_000) < 0.9 * mean_abs_err(5_000)
