"""The anisotropic logarithmic kernel and its Fourier density.

The interaction kernel is

    W_alpha(z) = -log|z| + alpha * x^2 / |z|^2,      z = x + iy != 0,

a log repulsion plus an angular anisotropy.  Its gradient, identified with
the complex scalar 2 dW/dz-bar, is

    -1/z-bar + (alpha/2) * (1/z - z/z-bar^2),

and its Fourier transform has density

    2*pi * ((1 - alpha) xi_1^2 + (1 + alpha) xi_2^2) / |xi|^4

away from the origin (plus a point mass at 0 whose coefficient never pairs
against the mass-zero differences used here, so it is dropped).

All functions are pure; share them freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PlanePoint

__all__ = [
    "KernelParams",
    "kernel_value",
    "kernel_gradient",
    "confinement_potential",
    "fourier_density",
]


@dataclass(frozen=True)
class KernelParams:
    """Anisotropy strength alpha.  The ellipse-law results need |alpha| < 1;
    evaluation outside that range is allowed but flagged in reports."""

    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", float(self.alpha))
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha!r}")

    @property
    def outside_theorem_range(self) -> bool:
        return abs(self.alpha) >= 1.0


def kernel_value(p: KernelParams, z: PlanePoint) -> float:
    """W_alpha(z) = -log|z| + alpha x^2/|z|^2.  Undefined at z = 0."""
    r2 = z.x * z.x + z.y * z.y
    if r2 == 0.0:
        raise ValueError("kernel is singular at z = 0")
    return -0.5 * math.log(r2) + p.alpha * z.x * z.x / r2


def kernel_gradient(p: KernelParams, z: PlanePoint) -> PlanePoint:
    """Gradient of W_alpha as a plane vector (dW/dx, dW/dy).

    Equals the complex scalar -1/z-bar + (alpha/2)(1/z - z/z-bar^2) read as
    (real, imaginary) parts.
    """
    r2 = z.x * z.x + z.y * z.y
    if r2 == 0.0:
        raise ValueError("kernel is singular at z = 0")
    r4 = r2 * r2
    gx = -z.x / r2 + 2.0 * p.alpha * z.x * z.y * z.y / r4
    gy = -z.y / r2 - 2.0 * p.alpha * z.x * z.x * z.y / r4
    return PlanePoint(gx, gy)


def confinement_potential(z: PlanePoint) -> float:
    """Quadratic confinement |z|^2 / 2."""
    return 0.5 * (z.x * z.x + z.y * z.y)


def fourier_density(p: KernelParams, xi: PlanePoint) -> float:
    """Density of the Fourier transform of W_alpha away from xi = 0.

    Nonnegative whenever |alpha| <= 1 and homogeneous of degree -2.
    """
    s2 = xi.x * xi.x + xi.y * xi.y
    if s2 == 0.0:
        raise ValueError("Fourier density is singular at xi = 0")
    return 2.0 * math.pi * ((1.0 - p.alpha) * xi.x * xi.x + (1.0 + p.alpha) * xi.y * xi.y) / (s2 * s2)


def _kernel_value_xy(dx: np.ndarray, dy: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorised W_alpha on difference components; callers keep dx, dy away from 0."""
    r2 = dx * dx + dy * dy
    return -0.5 * np.log(r2) + alpha * dx * dx / r2


def _fourier_density_xy(x1: np.ndarray, x2: np.ndarray, alpha: float) -> np.ndarray:
    """Vectorised Fourier density; callers exclude the origin."""
    s2 = x1 * x1 + x2 * x2
    return 2.0 * math.pi * ((1.0 - alpha) * x1 * x1 + (1.0 + alpha) * x2 * x2) / (s2 * s2)
