"""Plane points, axis-aligned ellipses, and boundary frames.

Every type here is an immutable value: safe to share between threads and
cheap to copy.  The ellipse E(a, b) is centred at the origin with axes along
the coordinate axes; its boundary runs counterclockwise under the
parametrisation t -> (a cos t, b sin t).  Sampling is deterministic per
seed; parallel callers must split seeds rather than share a generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "MEMBERSHIP_TOL",
    "PlanePoint",
    "Ellipse",
    "BoundaryPoint",
    "Membership",
    "ParticleConfig",
    "ellipse_contains",
    "boundary_point",
    "sample_ellipse_uniform",
]

# relative tolerance on q(z) = x^2/a^2 + y^2/b^2 against 1
MEMBERSHIP_TOL = 1e-12


def _check_finite(**named: float) -> None:
    for name, value in named.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PlanePoint:
    """A point z = x + iy of the plane, doubling as a complex scalar."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        _check_finite(x=self.x, y=self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "PlanePoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    def __abs__(self) -> float:
        return math.hypot(self.x, self.y)

    def __add__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "PlanePoint":
        return PlanePoint(-self.x, -self.y)

    def scaled(self, s: float) -> "PlanePoint":
        return PlanePoint(s * self.x, s * self.y)

    def dot(self, other: "PlanePoint") -> float:
        return self.x * other.x + self.y * other.y


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned origin-centred ellipse with semi-axes (a, b).

    Derived quantities: lam = (a - b)/(a + b) (always in (-1, 1)),
    c2 = b^2 - a^2 (sign encodes which axis carries the foci), area = pi*a*b.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        _check_finite(a=self.a, b=self.b)
        if self.a <= 0.0 or self.b <= 0.0:
            raise ValueError(f"semi-axes must be positive, got a={self.a}, b={self.b}")

    @property
    def lam(self) -> float:
        return (self.a - self.b) / (self.a + self.b)

    @property
    def c2(self) -> float:
        return self.b * self.b - self.a * self.a

    @property
    def area(self) -> float:
        return math.pi * self.a * self.b

    @property
    def focal_half_length(self) -> float:
        return math.sqrt(abs(self.c2))

    @property
    def focal_axis(self) -> str:
        """'x' if the foci lie on the horizontal axis (a >= b), else 'y'."""
        return "x" if self.a >= self.b else "y"

    def quadratic_form(self, z: PlanePoint) -> float:
        """q(z) = x^2/a^2 + y^2/b^2; the boundary is the level set q = 1."""
        return (z.x / self.a) ** 2 + (z.y / self.b) ** 2


class Membership(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def ellipse_contains(e: Ellipse, z: PlanePoint, tol: float = MEMBERSHIP_TOL) -> Membership:
    """Classify z against E(a, b) by q(z) compared with 1.

    The boundary band is |q(z) - 1| <= tol; with the default tol this is the
    double-precision conditioning limit of q.
    """
    q = e.quadratic_form(z)
    if abs(q - 1.0) <= tol:
        return Membership.BOUNDARY
    return Membership.INTERIOR if q < 1.0 else Membership.EXTERIOR


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary point with its unit tangent (counterclockwise) and exterior unit normal."""

    point: PlanePoint
    tangent: PlanePoint
    normal: PlanePoint
    t: float = 0.0  # parameter of (a cos t, b sin t), kept for bookkeeping


def boundary_point(e: Ellipse, t: float) -> BoundaryPoint:
    """Boundary frame at parameter t: point (a cos t, b sin t), unit tangent, exterior normal."""
    ct, st = math.cos(t), math.sin(t)
    point = PlanePoint(e.a * ct, e.b * st)
    tx, ty = -e.a * st, e.b * ct
    norm = math.hypot(tx, ty)
    tangent = PlanePoint(tx / norm, ty / norm)
    # rotate the tangent by -90 degrees; this points along grad q, i.e. outward
    normal = PlanePoint(tangent.y, -tangent.x)
    return BoundaryPoint(point=point, tangent=tangent, normal=normal, t=float(t))


@dataclass(frozen=True)
class ParticleConfig:
    """An ordered list of N plane points, stored as a read-only (N, 2) array.

    The config stands for the empirical probability measure (1/N) sum of
    point masses.  Coincident points are invalid states for the energy
    operations, which detect and reject them pair by pair; the constructor
    only enforces finiteness (an all-pairs scan here would make large
    samples quadratic to build).
    """

    xy: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.xy, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"expected an (N, 2) array, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise ValueError("a particle configuration needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise ValueError("particle coordinates must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "xy", arr)

    @classmethod
    def from_points(cls, points) -> "ParticleConfig":
        return cls(np.array([[p.x, p.y] for p in points], dtype=np.float64))

    def __len__(self) -> int:
        return self.xy.shape[0]

    @property
    def points(self) -> tuple:
        return tuple(PlanePoint(x, y) for x, y in self.xy)

    @property
    def as_complex(self) -> np.ndarray:
        return self.xy[:, 0] + 1j * self.xy[:, 1]

    def bbox_diameter(self) -> float:
        """Diagonal of the bounding box; a cheap scale for separation guards."""
        spans = self.xy.max(axis=0) - self.xy.min(axis=0)
        return float(math.hypot(spans[0], spans[1]))


def sample_ellipse_uniform(e: Ellipse, n: int, seed: int) -> ParticleConfig:
    """n i.i.d. draws from the uniform probability measure on E(a, b).

    Draws uniformly on the unit disk (r = sqrt(U), angle 2*pi*V) and scales
    the axes by a and b; linear maps push uniform measure to uniform
    measure, so there is no rejection bias.  Deterministic given the seed.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 samples, got {n}")
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(size=n))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
    xy = np.column_stack((e.a * r * np.cos(theta), e.b * r * np.sin(theta)))
    return ParticleConfig(xy)
