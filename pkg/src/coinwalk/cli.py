"""Command-line surface: reproducible machine-readable runs of every computation.

All angles on the command line are given in units of pi ("0.25" means
pi/4); simple fractions like "1/3" are accepted so grid angles stay exact.
JSON is the canonical output format; CSV is a flat projection of the same
numbers with metadata in "# key=value" header comments.

Exit codes: 0 success (a "no bound state" verdict is a result, not a
failure), 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import datetime
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .bulk import (
    GapClosedError,
    bloch_vector,
    dispersion,
    winding_number,
)
from .boundstates import (
    antisymmetric_mode,
    single_boundary_existence,
    single_boundary_mode,
)
from .lattice import (
    WalkerState,
    build_profile,
    delta_state,
    evolve,
    position_distribution,
)
from .spectral import (
    SIZE_CAP,
    diagonalize,
    find_bound_states,
    fit_splitting_decay,
    mode_residual,
    solve_wire_energy,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Malformed request that argparse could not catch; exits with code 2."""


def _angle_in_pi_units(text: str) -> float:
    """Parse an angle given in units of pi; accepts plain floats and 'p/q'."""
    raw = text.strip()
    try:
        if "/" in raw:
            num, den = raw.split("/", 1)
            value = float(num) / float(den)
        else:
            value = float(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an angle in units of pi: {text!r}") from exc
    if abs(value) > 1.0 + 1e-12:
        raise argparse.ArgumentTypeError("angles are limited to [-1, 1] in units of pi")
    return value * np.pi


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("value must be positive")
    return value


def _emit(args, command: str, params: dict, columns, rows, extras=None) -> None:
    """Write one run as JSON (canonical) or CSV (flat projection)."""
    extras = extras or {}
    meta = {
        "command": command,
        "version": __version__,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "seed": args.seed,
        "params": params,
    }
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "meta": meta,
            "data": [dict(zip(columns, row)) for row in rows],
            "extras": extras,
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write(f"# command={command}\n")
        buf.write(f"# version={__version__}\n")
        buf.write(f"# generated_at={meta['generated_at']}\n")
        buf.write(f"# seed={args.seed}\n")
        for key, value in params.items():
            buf.write(f"# param.{key}={value}\n")
        for key, value in extras.items():
            buf.write(f"# extra.{key}={json.dumps(value)}\n")
        buf.write(",".join(str(c) for c in columns) + "\n")
        for row in rows:
            buf.write(",".join("" if v is None else repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _profile_from_args(args):
    return build_profile(
        args.kind,
        args.n_sites,
        args.theta1,
        theta2=args.theta2,
        wire_length=args.wire_length,
        offset=args.offset,
    )


def cmd_dispersion(args) -> int:
    if args.k_points < 2:
        print("error: --k-points must be at least 2", file=sys.stderr)
        return 2
    ks = -np.pi + 2 * np.pi * (np.arange(args.k_points) + 0.5) / args.k_points
    rows = []
    for k in ks:
        e_plus = dispersion(args.theta, k)
        try:
            n_vec = bloch_vector(args.theta, k)
            nx, ny, nz = (float(v) for v in n_vec)
        except GapClosedError:
            nx = ny = nz = None
        rows.append((float(k), float(e_plus), float(-e_plus), nx, ny, nz))
    _emit(
        args,
        "dispersion",
        {"theta": args.theta, "k_points": args.k_points},
        ("k", "E_plus", "E_minus", "n_x", "n_y", "n_z"),
        rows,
    )
    return 0


def cmd_winding(args) -> int:
    if args.grid_points < 64:
        print("error: --grid-points must be at least 64", file=sys.stderr)
        return 2
    if args.steps > 1 and args.theta_max is None:
        print("error: sweeps with --steps > 1 need --theta-max", file=sys.stderr)
        return 2
    thetas = (
        np.array([args.theta_min])
        if args.steps == 1
        else np.linspace(args.theta_min, args.theta_max, args.steps)
    )
    rows = []
    for theta in thetas:
        try:
            result = winding_number(theta, grid_points=args.grid_points)
            rows.append((float(theta), result.m, result.integral_value, None))
        except GapClosedError:
            rows.append((float(theta), None, None, "gap-closed"))
    _emit(
        args,
        "winding",
        {
            "theta_min": args.theta_min,
            "theta_max": args.theta_max,
            "steps": args.steps,
            "grid_points": args.grid_points,
        },
        ("theta", "m", "integral_value", "reason"),
        rows,
    )
    return 0


def cmd_bound_single(args) -> int:
    energy = 0.0 if args.energy == "0" else float(np.pi)
    verdict = single_boundary_existence(args.theta1, args.theta2)
    params = {
        "theta1": args.theta1,
        "theta2": args.theta2,
        "energy": args.energy,
        "n_sites": args.n_sites,
        "offset": args.offset,
    }
    extras = {"exists": verdict.exists, "reason": verdict.reason}
    rows = []
    columns = ("n", "site", "prob", "a_re", "a_im", "b_re", "b_im")
    if verdict.exists:
        solution = single_boundary_mode(
            args.theta1, args.theta2, energy, args.n_sites, offset=args.offset
        )
        extras.update(
            {
                "kappa1": solution.kappa1,
                "kappa2": solution.kappa2,
                "eigenvector_residual": mode_residual(solution),
            }
        )
        offset = args.n_sites // 4 if args.offset is None else args.offset
        spin = solution.wavefunction.spinors()
        prob = position_distribution(solution.wavefunction)
        half = args.n_sites // 2
        for n in range(-half, args.n_sites - half):
            site = (offset + n) % args.n_sites
            a, b = spin[site]
            rows.append(
                (
                    n,
                    site,
                    float(prob[site]),
                    float(a.real),
                    float(a.imag),
                    float(b.real),
                    float(b.imag),
                )
            )
    _emit(args, "bound-single", params, columns, rows, extras)
    return 0


def cmd_wire_spectrum(args) -> int:
    thetas = [token.strip() for token in args.theta2_list.split(",") if token.strip()]
    if not thetas:
        print("error: --theta2-list is empty", file=sys.stderr)
        return 2
    values = {token: _angle_in_pi_units(token) for token in thetas}
    block_range = range(args.n_min, args.n_max + 1)
    if args.n_min < 1 or args.n_max < args.n_min:
        print("error: need 1 <= --n-min <= --n-max", file=sys.stderr)
        return 2

    def solve_cell(token, n):
        try:
            return (token, n), float(solve_wire_energy(-np.pi / 2, values[token], n) / np.pi)
        except (ValueError, RuntimeError) as exc:
            return (token, n), str(exc)

    cells = [(token, n) for token in thetas for n in block_range]
    results: dict = {}
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            for key, value in pool.map(lambda cell: solve_cell(*cell), cells):
                results[key] = value
    else:
        for cell in cells:
            key, value = solve_cell(*cell)
            results[key] = value

    columns = ["N"] + [f"E_over_pi[{token}]" for token in thetas]
    rows = []
    errors = []
    for n in block_range:
        row = [n]
        for token in thetas:
            value = results[(token, n)]
            if isinstance(value, str):
                errors.append({"theta2": token, "N": n, "error": value})
                row.append(None)
            else:
                row.append(float(f"{value:.6g}"))
        rows.append(tuple(row))

    fits = []
    fit_lengths = [n for n in block_range if n >= args.fit_min_n]
    if len(fit_lengths) >= 4:
        for token in thetas:
            if any(isinstance(results[(token, n)], str) for n in fit_lengths):
                continue
            fit = fit_splitting_decay(values[token], fit_lengths)
            fits.append(
                {
                    "theta2": token,
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "r_squared": fit.r_squared,
                    "kappa2_predicted": fit.kappa2_predicted,
                    "fit_n_min": fit_lengths[0],
                    "fit_n_max": fit_lengths[-1],
                }
            )
    extras = {"theta1": "-1/2", "fits": fits}
    if errors:
        extras["errors"] = errors
    _emit(
        args,
        "wire-spectrum",
        {
            "theta2_list": args.theta2_list,
            "n_min": args.n_min,
            "n_max": args.n_max,
            "fit_min_n": args.fit_min_n,
            "jobs": args.jobs,
        },
        columns,
        rows,
        extras,
    )
    return 0


def _initial_state(args, profile) -> WalkerState:
    text = args.init
    if text.startswith("delta:"):
        parts = text.split(":")
        try:
            site = int(parts[1])
        except (IndexError, ValueError) as exc:
            raise UsageError(f"malformed --init {text!r}") from exc
        component = parts[2] if len(parts) > 2 else "left"
        if component not in ("left", "right"):
            raise UsageError(f"malformed --init {text!r}")
        return delta_state(profile.length, site, component)
    if text.startswith("bound:"):
        family = text.split(":", 1)[1]
        if family not in ("0", "pi"):
            raise UsageError(f"malformed --init {text!r}; bound family must be 0 or pi")
        energy = 0.0 if family == "0" else float(np.pi)
        if args.kind == "single":
            solution = single_boundary_mode(
                args.theta1, args.theta2, energy, args.n_sites, offset=args.offset
            )
        elif args.kind == "antisymmetric":
            solution = antisymmetric_mode(
                args.theta1,
                args.theta2,
                energy,
                args.wire_length,
                args.n_sites,
                offset=args.offset,
            )
        else:
            raise UsageError("bound-state start needs kind 'single' or 'antisymmetric'")
        return solution.wavefunction
    raise UsageError(f"malformed --init {text!r}; use delta:SITE[:left|right] or bound:0|pi")


def cmd_evolve(args) -> int:
    if args.steps < 0:
        print("error: --steps must be non-negative", file=sys.stderr)
        return 2
    profile = _profile_from_args(args)
    try:
        state = _initial_state(args, profile)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    every = args.snapshot_every or max(1, args.steps // 10 or 1)
    snapshots = sorted(set([0] + list(range(every, args.steps, every)) + [args.steps]))
    rows = []
    current = state
    previous_t = 0
    for t in snapshots:
        current = evolve(current, profile, t - previous_t)
        previous_t = t
        prob = position_distribution(current)
        rows.extend((t, site, float(p)) for site, p in enumerate(prob))
    extras = {"final_norm": float(np.linalg.norm(current.amplitudes) ** 2)}
    _emit(
        args,
        "evolve",
        {
            "kind": args.kind,
            "theta1": args.theta1,
            "theta2": args.theta2,
            "wire_length": args.wire_length,
            "n_sites": args.n_sites,
            "offset": args.offset,
            "init": args.init,
            "steps": args.steps,
            "snapshot_every": every,
        },
        ("t", "site", "prob"),
        rows,
        extras,
    )
    return 0


def cmd_diagonalize(args) -> int:
    if args.n_sites > SIZE_CAP:
        print(f"error: --n-sites exceeds the dense-solver cap {SIZE_CAP}", file=sys.stderr)
        return 2
    profile = _profile_from_args(args)
    result = diagonalize(profile)
    near_zero = set(find_bound_states(result, 0.0, args.ipr_threshold).indices.tolist())
    near_pi = set(find_bound_states(result, np.pi, args.ipr_threshold).indices.tolist())
    rows = []
    for i in range(result.count):
        flag = "0" if i in near_zero else ("pi" if i in near_pi else None)
        rows.append((i, float(result.quasi_energies[i]), float(result.ipr[i]), flag))
    extras = {
        "localized_near_zero": len(near_zero),
        "localized_near_pi": len(near_pi),
        "ipr_threshold": args.ipr_threshold if args.ipr_threshold is not None else 4.0 / profile.length,
    }
    _emit(
        args,
        "diagonalize",
        {
            "kind": args.kind,
            "theta1": args.theta1,
            "theta2": args.theta2,
            "wire_length": args.wire_length,
            "n_sites": args.n_sites,
            "offset": args.offset,
        },
        ("index", "quasi_energy", "ipr", "localized_near"),
        rows,
        extras,
    )
    return 0


def _add_common(parser) -> None:
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", default=None, help="write to this path instead of stdout")
    parser.add_argument("--seed", type=int, default=0, help="recorded in metadata for reproducibility")


def _add_profile_flags(parser) -> None:
    parser.add_argument(
        "--kind",
        choices=("uniform", "single", "symmetric", "antisymmetric", "wire"),
        required=True,
    )
    parser.add_argument("--theta1", type=_angle_in_pi_units, required=True, help="angle in units of pi")
    parser.add_argument("--theta2", type=_angle_in_pi_units, default=None, help="angle in units of pi")
    parser.add_argument("--wire-length", type=int, default=None, help="block spans coordinates 0..N")
    parser.add_argument("--n-sites", type=_positive_int, default=64)
    parser.add_argument("--offset", type=int, default=None, help="ring site of coordinate n=0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coinwalk",
        description="Coin-shift quantum walks on a ring: bands, invariants, boundary modes.",
    )
    parser.add_argument("--version", action="version", version=f"coinwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="band energies and Bloch vector on a k-grid")
    p.add_argument("--theta", type=_angle_in_pi_units, required=True, help="angle in units of pi")
    p.add_argument("--k-points", type=_positive_int, default=256)
    _add_common(p)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("winding", help="topological winding number over a theta sweep")
    p.add_argument("--theta-min", type=_angle_in_pi_units, required=True)
    p.add_argument("--theta-max", type=_angle_in_pi_units, default=None)
    p.add_argument("--steps", type=_positive_int, default=1)
    p.add_argument("--grid-points", type=_positive_int, default=1024)
    _add_common(p)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("bound-single", help="closed-form mode at a single boundary")
    p.add_argument("--theta1", type=_angle_in_pi_units, required=True)
    p.add_argument("--theta2", type=_angle_in_pi_units, required=True)
    p.add_argument("--energy", choices=("0", "pi"), default="0")
    p.add_argument("--n-sites", type=_positive_int, default=64)
    p.add_argument("--offset", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_bound_single)

    p = sub.add_parser("wire-spectrum", help="bound-state energies of reflecting-end blocks")
    p.add_argument("--theta2-list", required=True, help="comma-separated angles in units of pi")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--fit-min-n", type=int, default=5)
    p.add_argument("--jobs", type=_positive_int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_wire_spectrum)

    p = sub.add_parser("evolve", help="time evolution with snapshot probability profiles")
    _add_profile_flags(p)
    p.add_argument("--init", default="delta:0", help="delta:SITE[:left|right] or bound:0|pi")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--snapshot-every", type=int, default=0, help="0 picks steps//10")
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("diagonalize", help="full spectrum with localization flags")
    _add_profile_flags(p)
    p.add_argument("--ipr-threshold", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_diagonalize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        return args.func(args)
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
