"""Command-line front end: descent runs, certification sweeps, potential profiles.

Exit codes: 0 success/all checks pass, 1 usage error, 2 failed check or
non-converged descent, 3 I/O error, 4 at least one inconclusive check with
none failing.  Outputs are plain CSV (17 significant digits, round-trip
exact for doubles), JSON reports, and optional presentational SVG; files
are written atomically (temp file then rename) and are byte-identical for
identical configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .analytic import candidate_axes
from .geometry import Ellipse, PlanePoint, sample_ellipse_uniform
from .kernel import KernelParams
from .numerics import potential_on_ellipse_measure
from .solver import SolveParams, empirical_stats, minimize, uniform_square_config
from .verify import CHECK_NAMES, run_check

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_IO = 3
EXIT_INCONCLUSIVE = 4

OUTDIR_ENV = "ELLIPSELAW_OUTDIR"


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    if not math.isfinite(v):
        raise RuntimeError(f"refusing to write non-finite value {v!r}")
    return format(float(v), ".17g")


def _atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# deterministic presentational SVG


def _svg_scatter(xy: np.ndarray, ellipse: Ellipse | None, size: int = 480) -> str:
    span = max(1e-9, float(np.max(np.abs(xy))) * 1.1)
    if ellipse is not None:
        span = max(span, 1.1 * max(ellipse.a, ellipse.b))
    s = size / (2.0 * span)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if ellipse is not None:
        parts.append(
            f'<ellipse cx="{size / 2:.2f}" cy="{size / 2:.2f}" rx="{ellipse.a * s:.2f}" '
            f'ry="{ellipse.b * s:.2f}" fill="none" stroke="#c22" stroke-width="1.5"/>'
        )
    for x, y in xy:
        parts.append(
            f'<circle cx="{size / 2 + x * s:.2f}" cy="{size / 2 - y * s:.2f}" r="1.6" '
            f'fill="#235" fill-opacity="0.7"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _svg_heatmap(xs: np.ndarray, ys: np.ndarray, vals: np.ndarray, size: int = 480) -> str:
    vmin, vmax = float(vals.min()), float(vals.max())
    spread = max(vmax - vmin, 1e-300)
    nx, ny = vals.shape
    cw, ch = size / nx, size / ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    for i in range(nx):
        for j in range(ny):
            g = int(round(255.0 * (vals[i, j] - vmin) / spread))
            parts.append(
                f'<rect x="{i * cw:.2f}" y="{(ny - 1 - j) * ch:.2f}" width="{cw + 0.5:.2f}" '
                f'height="{ch + 0.5:.2f}" fill="rgb({g},{g},{255 - g})"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# configuration handling


def _read_config_file(path: str) -> dict:
    """Plain key-value lines mirroring the long flags (key = value, # comments)."""
    out = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (s.strip() for s in line.split("=", 1))
                out[key.replace("-", "_")] = value
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return out


def _apply_config_file(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    allowed = {a.dest for a in parser._actions}
    file_values = _read_config_file(args.config)
    unknown = sorted(set(file_values) - allowed)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    # config supplies defaults; explicit flags win
    cmd = [a for a in sys.argv[1:] if a.startswith("--")]
    explicit = {a.lstrip("-").split("=", 1)[0].replace("-", "_") for a in cmd}
    for action in parser._actions:
        if action.dest in file_values and action.dest not in explicit:
            raw = file_values[action.dest]
            if action.type is not None:
                raw = action.type(raw)
            elif isinstance(action.const, bool) or isinstance(getattr(args, action.dest), bool):
                raw = raw.lower() in ("1", "true", "yes")
            setattr(args, action.dest, raw)


def _outdir(args: argparse.Namespace) -> str:
    if args.out:
        return args.out
    return os.environ.get(OUTDIR_ENV, ".")


# ---------------------------------------------------------------------------
# subcommands


@dataclass(frozen=True)
class RunConfig:
    """Validated per-command configuration snapshot (recorded into outputs)."""

    command: str
    values: dict


def _validated_config(command: str, args: argparse.Namespace, keys: list) -> RunConfig:
    values = {}
    for key in keys:
        values[key] = getattr(args, key)
    return RunConfig(command=command, values=values)


def cmd_minimize(args: argparse.Namespace) -> int:
    if args.n < 2:
        raise UsageError(f"need at least 2 particles, got {args.n}")
    if args.start not in ("square", "ellipse"):
        raise UsageError(f"unknown start distribution {args.start!r}")
    cfg = _validated_config(
        "minimize",
        args,
        ["alpha", "n", "seed", "max_iters", "grad_tol", "initial_step", "start", "half_width"],
    )
    params = KernelParams(args.alpha)
    if args.start == "square":
        start = uniform_square_config(args.n, args.half_width, args.seed)
    else:
        if params.outside_theorem_range:
            raise UsageError("ellipse start needs |alpha| < 1")
        start = sample_ellipse_uniform(candidate_axes(params), args.n, args.seed)
    sp = SolveParams(
        max_iters=args.max_iters,
        grad_tol=args.grad_tol,
        initial_step=args.initial_step,
        seed=args.seed,
    )
    result = minimize(params, start, sp)
    stats = empirical_stats(result.final)

    outdir = _outdir(args)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    target = None if params.outside_theorem_range else candidate_axes(params)
    warnings_list = []
    if params.outside_theorem_range:
        warnings_list.append("outside theorem range: |alpha| >= 1, no candidate ellipse")

    if "csv" in formats:
        _write_csv(
            os.path.join(outdir, "particles.csv"),
            ["x", "y"],
            ((float(x), float(y)) for x, y in result.final.xy),
        )
        _write_csv(
            os.path.join(outdir, "trace.csv"),
            ["iteration", "energy", "grad_rms"],
            (
                (k, float(e), float(g))
                for k, (e, g) in enumerate(zip(result.energy_trace, result.grad_norm_trace))
            ),
        )
    if "json" in formats:
        payload = {
            "config": cfg.values,
            "converged": result.converged,
            "message": result.message,
            "iterations": result.iterations,
            "final_energy": float(result.energy_trace[-1]),
            "stats": {
                "mean": [stats.mean.x, stats.mean.y],
                "ex2": stats.ex2,
                "ey2": stats.ey2,
                "exy": stats.exy,
                "max_abs": stats.max_abs,
                "fit_a": stats.fit_a,
                "fit_b": stats.fit_b,
            },
            "warnings": warnings_list,
        }
        if target is not None:
            payload["candidate_axes"] = [target.a, target.b]
        _write_json(os.path.join(outdir, "stats.json"), payload)
    if "svg" in formats:
        _atomic_write(
            os.path.join(outdir, "particles.svg"), _svg_scatter(result.final.xy, target)
        )
    return EXIT_OK if result.converged else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    names = [n.strip() for n in args.checks.split(",") if n.strip()]
    unknown = [n for n in names if n not in CHECK_NAMES]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}; expected {CHECK_NAMES}")
    if not names:
        raise UsageError("no checks requested")
    params = KernelParams(args.alpha)
    outdir = _outdir(args)

    kwargs_by_check = {
        "el1": {"n_points": args.n_points, "tol": args.el1_tol},
        "el2": {"tol": args.el2_tol},
        "laplacian": {"tol": args.lap_tol},
        "minprinciple": {},
        "semicircle": {
            "n_particles": args.semicircle_n,
            "tol_ks": args.ks_tol,
            "seed": args.seed,
        },
        "fourier": {"rel_tol": args.fourier_gap, "seed": args.seed},
        "plemelj": {"panels": args.panels},
    }

    reports = []
    for name in names:
        report = run_check(name, params, **kwargs_by_check[name])
        reports.append(report)
        print(report.summary_line())
        _write_json(os.path.join(outdir, f"report_{name}.json"), report.to_dict())

    _write_csv(
        os.path.join(outdir, "verify_summary.csv"),
        ["check", "alpha", "status"],
        ((r.name, float(r.alpha), r.status) for r in reports),
    )
    if any(r.status == "fail" for r in reports):
        return EXIT_FAIL
    if any(r.status == "inconclusive" for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_potential_profile(args: argparse.Namespace) -> int:
    if args.nx < 1 or args.ny < 1:
        raise UsageError("grid must contain at least one sample per axis")
    if args.xmax < args.xmin or args.ymax < args.ymin:
        raise UsageError("grid extents must satisfy min <= max")
    params = KernelParams(args.alpha)
    if args.ellipse:
        try:
            a_str, b_str = args.ellipse.split(",")
            e = Ellipse(float(a_str), float(b_str))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad --ellipse value {args.ellipse!r}: {exc}")
    else:
        if params.outside_theorem_range:
            raise UsageError("no candidate ellipse for |alpha| >= 1; pass --ellipse a,b")
        e = candidate_axes(params)

    xs = np.linspace(args.xmin, args.xmax, args.nx)
    ys = np.linspace(args.ymin, args.ymax, args.ny)
    vals = np.empty((args.nx, args.ny))
    rows = []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            vals[i, j] = potential_on_ellipse_measure(params, e, PlanePoint(x, y))
            rows.append((float(x), float(y), float(vals[i, j])))

    outdir = _outdir(args)
    _write_csv(os.path.join(outdir, "potential.csv"), ["x", "y", "P"], rows)
    if args.svg:
        _atomic_write(os.path.join(outdir, "potential.svg"), _svg_heatmap(xs, ys, vals))
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellipselaw",
        description="Equilibrium measures of the anisotropic logarithmic energy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("minimize", help="run the particle descent")
    pm.add_argument("--alpha", type=float, required=True)
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--max-iters", type=int, default=5000)
    pm.add_argument("--grad-tol", type=float, default=1e-6)
    pm.add_argument("--initial-step", type=float, default=1.0)
    pm.add_argument("--start", type=str, default="square", help="square | ellipse")
    pm.add_argument("--half-width", type=float, default=2.0)
    pm.add_argument("--formats", type=str, default="csv,json")
    pm.add_argument("--out", type=str, default=None)
    pm.add_argument("--config", type=str, default=None)
    pm.set_defaults(func=cmd_minimize)

    pv = sub.add_parser("verify", help="run certification checks")
    pv.add_argument("--alpha", type=float, required=True)
    pv.add_argument("--checks", type=str, required=True)
    pv.add_argument("--seed", type=int, default=7)
    pv.add_argument("--n-points", type=int, default=200)
    pv.add_argument("--el1-tol", type=float, default=2e-5)
    pv.add_argument("--el2-tol", type=float, default=1e-5)
    pv.add_argument("--lap-tol", type=float, default=0.03)
    pv.add_argument("--ks-tol", type=float, default=0.05)
    pv.add_argument("--fourier-gap", type=float, default=0.05)
    pv.add_argument("--panels", type=int, default=2048)
    pv.add_argument("--semicircle-n", type=int, default=2000)
    pv.add_argument("--out", type=str, default=None)
    pv.add_argument("--config", type=str, default=None)
    pv.set_defaults(func=cmd_verify)

    pp = sub.add_parser("potential-profile", help="tabulate P on a grid")
    pp.add_argument("--alpha", type=float, required=True)
    pp.add_argument("--xmin", type=float, default=0.0)
    pp.add_argument("--xmax", type=float, default=2.0)
    pp.add_argument("--nx", type=int, default=101)
    pp.add_argument("--ymin", type=float, default=0.0)
    pp.add_argument("--ymax", type=float, default=0.0)
    pp.add_argument("--ny", type=int, default=1)
    pp.add_argument("--ellipse", type=str, default=None, help="a,b override")
    pp.add_argument("--svg", action="store_true")
    pp.add_argument("--out", type=str, default=None)
    pp.add_argument("--config", type=str, default=None)
    pp.set_defaults(func=cmd_potential_profile)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        for sp_action in parser._subparsers._group_actions:
            if args.command in sp_action.choices:
                _apply_config_file(args, sp_action.choices[args.command])
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
