"""Discrete N-particle energy and deterministic descent.

The empirical discretisation of the continuum energy is

    E(z_1..z_N) = (1/N^2) sum_{i != j} W_alpha(z_i - z_j) + (1/N) sum_i |z_i|^2,

the standard mean-field weighting with the diagonal excluded.  Minimisation
is plain gradient descent with Armijo backtracking, so the energy trace is
non-increasing by construction.  Pair sums run in a fixed order on a single
thread; results are reproducible bit for bit for a given start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ParticleConfig, PlanePoint
from .kernel import KernelParams

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f

__all__ = [
    "ParticleConfig",
    "SolveParams",
    "SolveResult",
    "discrete_energy",
    "discrete_gradient",
    "minimize",
    "EmpiricalStats",
    "empirical_stats",
    "semicircle_cdf",
    "y_marginal_vs_semicircle",
    "uniform_square_config",
]


@njit(cache=True)
def _pair_energy(xs, ys, alpha):
    """Sum of W_alpha over unordered pairs, plus the closest pair found."""
    n = xs.shape[0]
    total = 0.0
    min_r2 = np.inf
    i_min = -1
    j_min = -1
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i + 1, n):
            dx = xi - xs[j]
            dy = yi - ys[j]
            r2 = dx * dx + dy * dy
            if r2 < min_r2:
                min_r2 = r2
                i_min = i
                j_min = j
            if r2 > 0.0:
                total += -0.5 * math.log(r2) + alpha * dx * dx / r2
    return total, min_r2, i_min, j_min


@njit(cache=True)
def _pair_energy_grad(xs, ys, alpha, gx, gy):
    """Pair energy plus per-particle sums of grad W_alpha(z_i - z_j)."""
    n = xs.shape[0]
    total = 0.0
    min_r2 = np.inf
    i_min = -1
    j_min = -1
    for i in range(n):
        gx[i] = 0.0
        gy[i] = 0.0
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i + 1, n):
            dx = xi - xs[j]
            dy = yi - ys[j]
            r2 = dx * dx + dy * dy
            if r2 < min_r2:
                min_r2 = r2
                i_min = i
                j_min = j
            if r2 > 0.0:
                r4 = r2 * r2
                total += -0.5 * math.log(r2) + alpha * dx * dx / r2
                wx = -dx / r2 + 2.0 * alpha * dx * dy * dy / r4
                wy = -dy / r2 - 2.0 * alpha * dx * dx * dy / r4
                gx[i] += wx
                gy[i] += wy
                gx[j] -= wx
                gy[j] -= wy
    return total, min_r2, i_min, j_min


def _energy_arrays(xs, ys, alpha):
    pair, min_r2, i_min, j_min = _pair_energy(xs, ys, alpha)
    if min_r2 <= 0.0:
        raise ValueError(f"coincident particles at indices ({i_min}, {j_min})")
    n = xs.shape[0]
    conf = float(np.sum(xs * xs + ys * ys))
    return 2.0 * pair / (n * n) + conf / n, math.sqrt(min_r2)


def _energy_grad_arrays(xs, ys, alpha):
    n = xs.shape[0]
    gx = np.empty(n)
    gy = np.empty(n)
    pair, min_r2, i_min, j_min = _pair_energy_grad(xs, ys, alpha, gx, gy)
    if min_r2 <= 0.0:
        raise ValueError(f"coincident particles at indices ({i_min}, {j_min})")
    energy = 2.0 * pair / (n * n) + float(np.sum(xs * xs + ys * ys)) / n
    gx = 2.0 * gx / (n * n) + 2.0 * xs / n
    gy = 2.0 * gy / (n * n) + 2.0 * ys / n
    return energy, gx, gy, math.sqrt(min_r2)


def _require_pairable(c: ParticleConfig) -> None:
    if len(c) < 2:
        raise ValueError(f"need at least 2 particles, got {len(c)}")


def discrete_energy(p: KernelParams, c: ParticleConfig) -> float:
    """Empirical energy of the configuration; rejects coincident pairs by index."""
    _require_pairable(c)
    energy, _ = _energy_arrays(c.xy[:, 0].copy(), c.xy[:, 1].copy(), p.alpha)
    return energy


def discrete_gradient(p: KernelParams, c: ParticleConfig) -> list:
    """Per-particle gradient of discrete_energy:
    (2/N^2) sum_{j != i} grad W_alpha(z_i - z_j) + (2/N) z_i."""
    _require_pairable(c)
    _, gx, gy, _ = _energy_grad_arrays(c.xy[:, 0].copy(), c.xy[:, 1].copy(), p.alpha)
    return [PlanePoint(float(a), float(b)) for a, b in zip(gx, gy)]


@dataclass(frozen=True)
class SolveParams:
    """Descent controls.  min_sep_guard defaults to 1e-9 times the bounding
    box diameter of the start configuration when left as None; the log
    repulsion makes collisions infinitely expensive, but a finite step can
    overshoot, and the guard keeps the energy's domain intact."""

    max_iters: int = 5000
    grad_tol: float = 1e-6
    initial_step: float = 1.0
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    seed: int = 0
    min_sep_guard: float | None = None

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        for name in ("grad_tol", "initial_step"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("backtrack_factor", "armijo_c"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.min_sep_guard is not None and self.min_sep_guard <= 0.0:
            raise ValueError("min_sep_guard must be positive")


@dataclass(frozen=True)
class SolveResult:
    final: ParticleConfig
    energy_trace: np.ndarray
    grad_norm_trace: np.ndarray
    iterations: int
    converged: bool
    message: str = ""


def minimize(p: KernelParams, start: ParticleConfig, sp: SolveParams) -> SolveResult:
    """Gradient descent with Armijo backtracking.

    A step s is accepted when E(x - s g) <= E(x) - armijo_c * s * |g|^2 and
    the proposal keeps every pair farther apart than the separation guard;
    otherwise s shrinks by backtrack_factor.  Accepted steps grow back by the
    same factor, so the search adapts to the local curvature.  Terminates at
    RMS per-particle gradient norm <= grad_tol or at max_iters.
    """
    _require_pairable(start)
    n = len(start)
    xs = start.xy[:, 0].copy()
    ys = start.xy[:, 1].copy()
    guard = sp.min_sep_guard
    if guard is None:
        guard = 1e-9 * max(start.bbox_diameter(), 1.0)

    energy, gx, gy, min_sep = _energy_grad_arrays(xs, ys, p.alpha)
    if min_sep <= guard:
        raise ValueError(f"start configuration violates the separation guard ({min_sep:.3e})")

    energy_trace = [energy]
    grad_trace = []
    step = sp.initial_step
    converged = False
    message = "max_iters reached"
    iterations = 0

    for _ in range(sp.max_iters):
        grad_sq = float(np.sum(gx * gx + gy * gy))
        rms = math.sqrt(grad_sq / n)
        grad_trace.append(rms)
        if rms <= sp.grad_tol:
            converged = True
            message = "gradient tolerance reached"
            break

        accepted = False
        while step >= 1e-18 * sp.initial_step:
            trial_x = xs - step * gx
            trial_y = ys - step * gy
            trial_energy, trial_sep = _energy_arrays(trial_x, trial_y, p.alpha)
            if trial_sep > guard and trial_energy <= energy - sp.armijo_c * step * grad_sq:
                accepted = True
                break
            step *= sp.backtrack_factor
        if not accepted:
            message = "line search stalled at machine-minimum step"
            break

        xs, ys, energy = trial_x, trial_y, trial_energy
        energy_trace.append(energy)
        iterations += 1
        step = min(step / sp.backtrack_factor, 1e12)
        energy, gx, gy, _ = _energy_grad_arrays(xs, ys, p.alpha)
        energy = energy_trace[-1]  # identical evaluation; keep the traced value

    else:
        grad_sq = float(np.sum(gx * gx + gy * gy))
        grad_trace.append(math.sqrt(grad_sq / n))

    return SolveResult(
        final=ParticleConfig(np.column_stack((xs, ys))),
        energy_trace=np.asarray(energy_trace),
        grad_norm_trace=np.asarray(grad_trace),
        iterations=iterations,
        converged=converged,
        message=message,
    )


@dataclass(frozen=True)
class EmpiricalStats:
    mean: PlanePoint
    ex2: float
    ey2: float
    exy: float
    max_abs: float
    fit_a: float
    fit_b: float


def empirical_stats(c: ParticleConfig) -> EmpiricalStats:
    """Sample moments plus the smallest axis-aligned ellipse containing all
    points whose aspect comes from the componentwise maxima."""
    _require_pairable(c)
    x = c.xy[:, 0]
    y = c.xy[:, 1]
    a_hat = float(np.max(np.abs(x)))
    b_hat = float(np.max(np.abs(y)))
    sx = x / a_hat if a_hat > 0.0 else np.zeros_like(x)
    sy = y / b_hat if b_hat > 0.0 else np.zeros_like(y)
    rho = math.sqrt(float(np.max(sx * sx + sy * sy))) if (a_hat > 0 or b_hat > 0) else 0.0
    return EmpiricalStats(
        mean=PlanePoint(float(x.mean()), float(y.mean())),
        ex2=float(np.mean(x * x)),
        ey2=float(np.mean(y * y)),
        exy=float(np.mean(x * y)),
        max_abs=float(np.max(np.hypot(x, y))),
        fit_a=rho * a_hat,
        fit_b=rho * b_hat,
    )


def semicircle_cdf(y, radius: float):
    """CDF of the density (2/(pi R^2)) sqrt(R^2 - y^2) on [-R, R]."""
    u = np.clip(np.asarray(y, dtype=np.float64) / radius, -1.0, 1.0)
    return 0.5 + (np.arcsin(u) + u * np.sqrt(1.0 - u * u)) / math.pi


def y_marginal_vs_semicircle(c: ParticleConfig, radius: float) -> float:
    """Kolmogorov-Smirnov distance of the sample's vertical marginal to the
    semicircle law of the given radius."""
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    from scipy.stats import kstest

    return float(kstest(c.xy[:, 1], lambda t: semicircle_cdf(t, radius)).statistic)


def uniform_square_config(n: int, half_width: float = 2.0, seed: int = 0) -> ParticleConfig:
    """n i.i.d. points uniform on the square [-half_width, half_width]^2."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    xy = rng.uniform(-half_width, half_width, size=(n, 2))
    return ParticleConfig(xy)
