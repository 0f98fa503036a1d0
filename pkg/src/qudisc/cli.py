"""Command-line front end.

Every command prints one machine-readable record: a JSON object with numbers
rendered to 15 significant digits (the scan command appends a CSV body after
the record).  Repeated invocations with the same flags and seed produce
byte-identical output.  Exit codes: 0 success, 1 verification failure,
2 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import DomainError
from .harness import Tolerances, verify_all
from .optics import (
    analytic_discriminator_probabilities,
    prepare_state_network,
    simulate_discriminator,
)
from .povm import (
    Priors,
    average_success,
    omega1_from_x,
    optimal_average,
    optimal_pure,
    success_curve_x,
    x_from_omega1,
)
from .spaces import dimension_table


def _format_number(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.15g}"


def _render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}  {json.dumps(key)}: {_render_json(val, indent + 1)}"
            for key, val in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_render_json(val, indent + 1)}" for val in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _format_number(obj)


def _emit_record(command: str, params: dict, results: dict, seed: int | None = None) -> None:
    record = {
        "command": command,
        "version": __version__,
        "params": params,
        "seed": seed,
        "results": results,
    }
    print(_render_json(record))


def _resolve_omega1(args) -> float:
    if args.x is not None:
        return omega1_from_x(args.x)
    if args.omega1 is not None:
        return float(args.omega1)
    raise DomainError("provide either --omega1 or --x")


def _priors_from_eta1(eta1: float, *, open_interval: bool) -> Priors:
    if open_interval and not 0.0 < eta1 < 1.0:
        raise DomainError(f"eta1 must lie strictly inside (0, 1), got {eta1}")
    if not 0.0 <= eta1 <= 1.0:
        raise DomainError(f"eta1 must lie in [0, 1], got {eta1}")
    return Priors.from_eta1(eta1)


def cmd_dims(args) -> int:
    table = dimension_table(args.n)
    results = {
        "sigma": table.sigma,
        "s0": table.s0,
        "s1": table.s1,
        "s2": table.s2,
        "s3": table.s3,
        "s4": table.s4,
        "s5": table.s5,
        "s6": table.s6,
        "i0": table.i0,
    }
    _emit_record("dims", {"n": args.n}, results)
    return 0


def cmd_verify(args) -> int:
    tol = args.tol if args.tol is not None else _env_tolerance()
    tolerances = Tolerances() if tol is None else Tolerances(
        tight=tol, op=tol, scan=tol
    )
    report = verify_all(args.n_max, tolerances)
    if args.json:
        results = {
            "checks": [
                {
                    "name": r.name,
                    "scope": r.scope,
                    "passed": r.passed,
                    "worst_deviation": r.deviation,
                    "tolerance": r.tolerance,
                }
                for r in report.results
            ],
            "passed": report.passed,
        }
        _emit_record("verify", {"n_max": args.n_max, "tol": tol}, results)
    else:
        sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


def _env_tolerance() -> float | None:
    raw = os.environ.get("QUDISC_TOL")
    return float(raw) if raw else None


def cmd_scan(args) -> int:
    priors = _priors_from_eta1(args.eta1, open_interval=True)
    points = max(args.steps, 2)
    xs = np.linspace(1.0, 4.0, points)
    _emit_record(
        "scan",
        {"n": args.n, "eta1": args.eta1, "steps": args.steps},
        {"rows": points, "columns": ["omega1", "x", "p_avg", "p_subspace"]},
    )
    print("omega1,x,p_avg,p_subspace")
    for x in xs:
        omega1 = omega1_from_x(float(x))
        row = (
            omega1,
            float(x),
            average_success(args.n, omega1, priors),
            success_curve_x(float(x), priors),
        )
        print(",".join(_format_number(v) for v in row))
    return 0


def cmd_optimal(args) -> int:
    priors = _priors_from_eta1(args.eta1, open_interval=True)
    result = optimal_average(args.n, priors)
    results = {
        "regime": result.regime,
        "x_star": result.x_star,
        "omega1_star": result.omega1_star,
        "p_avg_opt": result.value,
    }
    params = {"n": args.n, "eta1": args.eta1}
    if args.overlap_sq is not None:
        params["overlap_sq"] = args.overlap_sq
        results["p_pure_opt"] = optimal_pure(args.overlap_sq, priors).value
    _emit_record("optimal", params, results)
    return 0


def cmd_simulate(args) -> int:
    priors = _priors_from_eta1(args.eta1, open_interval=False)
    omega1 = _resolve_omega1(args)
    run = simulate_discriminator(omega1, priors, shots=args.shots, seed=args.seed)
    analytic = analytic_discriminator_probabilities(omega1, priors)
    sigma = float(
        np.sqrt(max(analytic["success"] * (1 - analytic["success"]), 1e-300) / args.shots)
    )
    results = {
        "counts": {k: run.counts[k] for k in ("D1", "D2", "F")},
        "input_counts": {k: run.input_counts[k] for k in ("g", "h")},
        "empirical_success": run.empirical_success,
        "analytic_success": analytic["success"],
        "analytic_probabilities": {k: analytic[k] for k in ("D1", "D2", "F")},
        "success_sigma": sigma,
        # Full-device average success at dimension n; the sampled six-port
        # device realizes the per-subspace factor of this quantity.
        "analytic_average_success": average_success(args.n, omega1, priors),
    }
    _emit_record(
        "simulate",
        {
            "n": args.n,
            "eta1": args.eta1,
            "omega1": omega1,
            "x": x_from_omega1(omega1),
            "shots": args.shots,
        },
        results,
        seed=args.seed,
    )
    return 0


def _read_amplitudes(path: str) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            re_part = float(parts[0])
            im_part = float(parts[1]) if len(parts) > 1 else 0.0
            values.append(complex(re_part, im_part))
    if not values:
        raise DomainError(f"no amplitudes found in {path}")
    return np.array(values, dtype=complex)


def cmd_prepare(args) -> int:
    amps = _read_amplitudes(args.amplitudes)
    net = prepare_state_network(amps, len(amps))
    text = net.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    target_error = float(np.abs(net.unitary()[:, 0] - amps).max())
    _emit_record(
        "prepare",
        {"amplitudes": args.amplitudes, "out": args.out, "modes": len(amps)},
        {"layers": len(net.layers), "column_error": target_error},
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qudisc",
        description="Programmable unambiguous discriminator between two unknown qudit states",
    )
    parser.add_argument("--version", action="version", version=f"qudisc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="print the subspace dimension table")
    p.add_argument("--n", type=int, required=True, help="qudit dimension (>= 2)")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("verify", help="run the full verification suite")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--tol", type=float, default=None,
                   help="override all comparison tolerances (default from QUDISC_TOL)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="tabulate success probabilities on an x grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eta1", type=float, required=True)
    p.add_argument("--steps", type=int, default=51,
                   help="grid points on [1, 4] (values below 2 give the endpoints)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimal", help="closed-form optimum for given priors")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--eta1", type=float, required=True)
    p.add_argument("--overlap-sq", type=float, default=None,
                   help="also report the pure-state optimum at this squared overlap")
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("simulate", help="sample the six-port discriminator")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--eta1", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--omega1", type=float, default=None, help="angle in radians")
    group.add_argument("--x", type=float, default=None, help="x = 1 + 3 cos^2(omega1)")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("prepare", help="synthesize a state-preparation network")
    p.add_argument("amplitudes", help="text file, one amplitude per line (re [im])")
    p.add_argument("--out", default=None, help="write the network here instead of stdout")
    p.set_defaults(func=cmd_prepare)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
