"""Command-line front end.

Subcommands: sample, certify, scan, fiber, poly, thresholds.  Reports
embed the tool version, the fully resolved configuration, and the seed,
so every run is reproducible bit-for-bit.  Exit codes: 0 for success
(including negative findings such as an invalid certificate), 2 for
usage or validation errors, 3 for internal invariant violations (a scan
witness that failed its closed-form re-verification).

A JSON config file may supply any long-option value under its flag name
(e.g. {"t": 1.5, "starts": 64}); explicit flags override the file.  The
environment variable QUADLAB_WORKERS sets the default worker count for
scans.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, arfamily, explore, fibers, quadric
from .armap import degeneracy_threshold
from .certify import certify as run_certify
from .certify import optimize_epsilon
from .explore import Optimizer, ScanConfig


class ValidationError(Exception):
    pass


def _parse_grid(text: str) -> tuple[float, ...]:
    """start:stop:step inclusive of both endpoints (1e-12 slack), or a
    comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(v) for v in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"bad grid bounds {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        grid = [start + k * step for k in range(n)]
        if grid and stop - grid[-1] > 1e-12:
            grid.append(stop)
        return tuple(min(v, stop) for v in grid)
    return tuple(float(v) for v in text.split(","))


def _parse_point(text: str) -> list[complex]:
    """A C^4 point: 8 comma-separated reals (re/im interleaved) or 4
    reals shorthand for a real point."""
    vals = [float(v) for v in text.split(",")]
    if len(vals) == 8:
        return [complex(vals[2 * k], vals[2 * k + 1]) for k in range(4)]
    if len(vals) == 4:
        return [complex(v, 0.0) for v in vals]
    raise ValidationError("point must have 4 (real) or 8 (re,im interleaved) values")


def _emit(payload: dict, out: str | None, fmt: str, csv_text: str | None = None):
    if fmt == "csv":
        if csv_text is None:
            raise ValidationError("csv output is not available for this command")
        text = csv_text
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stamp(payload: dict, args_ns, parser_defaults: dict) -> dict:
    resolved = {k: v for k, v in vars(args_ns).items() if k not in ("func", "config")}
    return {
        "tool": "quadlab",
        "version": __version__,
        "config": _jsonable(resolved),
        **payload,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    if not args.t > 1.0:
        raise ValidationError("t must exceed 1")
    if args.n < 2:
        raise ValidationError("n must be >= 2")
    if args.count < 1:
        raise ValidationError("count must be >= 1")
    points = quadric.sample_mt(args.n, args.t, args.count, args.seed)
    if args.n == 3:
        qpoints = [p.to_quadric_point() for p in points]
        csv_text = quadric.points_to_csv(qpoints)
        listing = [p.to_json() for p in qpoints]
    else:
        csv_text = None
        listing = [p.to_json() for p in points]
    payload = _stamp({"points": listing}, args, {})
    _emit(payload, args.out, args.format, csv_text)
    return 0


def cmd_certify(args) -> int:
    if args.optimize:
        eps, t_lower = optimize_epsilon(strict_paper_mode=args.strict_paper)
        cert = run_certify(eps, strict_paper_mode=args.strict_paper)
        payload = {"optimized": True, "epsilon_star": eps, "t_lower_star": t_lower,
                   "certificate": cert.to_json()}
    else:
        if args.epsilon is None:
            raise ValidationError("provide --epsilon or --optimize")
        cert = run_certify(args.epsilon, strict_paper_mode=args.strict_paper)
        payload = {"certificate": cert.to_json()}
    _emit(_stamp(payload, args, {}), args.out, args.format)
    return 0


def _scan_config(args) -> ScanConfig:
    if args.t is not None and args.t_grid is not None:
        raise ValidationError("give either --t or --t-grid, not both")
    if args.t is not None:
        grid = (args.t,)
    elif args.t_grid is not None:
        grid = _parse_grid(args.t_grid)
    else:
        raise ValidationError("a scan needs --t or --t-grid")
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("QUADLAB_WORKERS", "1"))
    try:
        return ScanConfig(
            t_grid=grid,
            samples_per_t=args.samples,
            multistart_count=args.starts,
            optimizer=Optimizer(args.optimizer),
            seed=args.seed,
            budget=args.budget,
            workers=workers,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def cmd_scan(args) -> int:
    config = _scan_config(args)
    if args.kind == "arfamily":
        if not args.q:
            raise ValidationError("scan arfamily needs --q")
        q = _parse_q(args.q)
        report = explore.arfamily_scan(q, config.t_grid, config)
    elif args.kind == "t0":
        report = explore.empirical_t0(config)
    elif args.kind in ("degeneracy", "injectivity"):
        report = explore.scan_grid(args.kind, config)
    else:
        raise ValidationError(f"unknown scan kind {args.kind!r}")
    payload = _stamp({"report": report.to_json()}, args, {})
    _emit(payload, args.out, args.format, report.to_csv())
    return 0


def _parse_q(text: str) -> arfamily.Poly4:
    try:
        return arfamily.parse_poly(text)
    except arfamily.PolyParseError as exc:
        raise ValidationError(f"bad polynomial: {exc}") from exc


def cmd_fiber(args) -> int:
    w = _parse_point(args.w)
    try:
        base = quadric.QuadricPoint.from_w(w)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    fs = fibers.fiber(base)
    payload = {"fiber": fs.to_json(), "size_with_multiplicity": fs.size}
    if args.t is not None:
        payload["partner_norm_excess"] = fibers.partner_norm_excess(base, args.t)
        payload["t"] = args.t
    _emit(_stamp(payload, args, {}), args.out, args.format)
    return 0


def cmd_poly(args) -> int:
    q = _parse_q(args.q)
    if args.action == "laplacian":
        payload = {"input": str(q), "laplacian": str(arfamily.laplacian(q)),
                   "harmonic": arfamily.is_harmonic(q)}
    elif args.action == "ar-op":
        payload = {"input": str(q), "operator_output": str(arfamily.ar_operator(q))}
    elif args.action == "polarize":
        payload = {"input": str(q), "polarized": str(arfamily.polarize(q))}
    elif args.action == "check":
        payload = {"input": str(q), "harmonic": arfamily.is_harmonic(q)}
        try:
            payload["divisible_by_zb_wb"] = arfamily.divisibility_check(q)
        except ValueError as exc:
            payload["divisible_by_zb_wb"] = None
            payload["divisibility_note"] = str(exc)
        mn, zw = arfamily.q_nonvanishing_check(q, args.samples, args.seed)
        payload["min_abs_on_sphere"] = mn
        payload["min_witness"] = [[zw[0].real, zw[0].imag], [zw[1].real, zw[1].imag]]
        payload["nonvanishing_note"] = "heuristic Monte-Carlo + descent; evidence only"
    else:
        raise ValidationError(f"unknown poly action {args.action!r}")
    _emit(_stamp(payload, args, {}), args.out, args.format)
    return 0


def cmd_thresholds(args) -> int:
    payload = {
        "degeneracy_threshold": degeneracy_threshold(),
        "degeneracy_threshold_formula": "sqrt((2+sqrt(2))/3); restricted map "
        "degenerates on M_t^3 iff t is at least this",
        "double_root_threshold": 2.0 / math.sqrt(3.0),
        "double_root_threshold_formula": "2/sqrt(3); fiber quadratic acquires "
        "double roots on M_t^3 iff t is at least this",
        "certified_embedding_bound": 1.0 + 1e-6,
        "certified_embedding_bound_formula": "1 + eps^2/2 at eps = sqrt(2)e-3; "
        "restricted map embeds M_t^3 for 1 < t < this",
    }
    _emit(_stamp(payload, args, {}), args.out, args.format)
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--config", help="JSON file of default option values")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadlab",
        description="numerical laboratory for the Ahern-Rudin map on the affine quadric",
    )
    parser.add_argument("--version", action="version", version=f"quadlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample points of M_t^n")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("certify", help="run the embedding certificate chain")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--optimize", action="store_true", help="largest valid epsilon by bisection")
    p.add_argument("--strict-paper", action="store_true",
                   help="use the weaker classical final inequality (unit margin)")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="optimizer scans over M_t^3")
    p.add_argument("kind", choices=("degeneracy", "injectivity", "t0", "arfamily"))
    p.add_argument("--t", type=float)
    p.add_argument("--t-grid", help="start:stop:step (inclusive) or comma list")
    p.add_argument("--q", help="generator polynomial for arfamily scans")
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimizer", choices=[o.value for o in Optimizer],
                   default=Optimizer.NELDER_MEAD_ON_CHART.value)
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers over grid values (default $QUADLAB_WORKERS or 1)")
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fiber", help="closed-form fiber of a quadric point")
    p.add_argument("--w", required=True,
                   help="point: 8 reals re,im interleaved, or 4 reals for a real point")
    p.add_argument("--t", type=float, help="also report the partner norm excess at this t")
    _add_common(p)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("poly", help="exact polynomial calculus")
    p.add_argument("action", choices=("laplacian", "ar-op", "polarize", "check"))
    p.add_argument("--q", required=True, help="polynomial in z, zb, w, wb")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("thresholds", help="print the characteristic parameter values")
    _add_common(p)
    p.set_defaults(func=cmd_thresholds)

    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Prepend defaults from --config as if typed before explicit flags."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError:
        return argv
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValidationError("config file must hold a JSON object")
    known = {a for a in _collect_option_names(parser)}
    injected: list[str] = []
    for key, value in data.items():
        flag = "--" + key.replace("_", "-")
        if flag not in known:
            raise ValidationError(f"unknown config key {key!r}")
        if isinstance(value, bool):
            if value:
                injected.append(flag)
        else:
            injected.extend([flag, str(value)])
    # inject after the subcommand tokens so argparse assigns them there
    head = argv[: _positional_prefix_len(argv)]
    tail = argv[_positional_prefix_len(argv):]
    return head + injected + tail


def _positional_prefix_len(argv: list[str]) -> int:
    n = 0
    for tok in argv:
        if tok.startswith("-"):
            break
        n += 1
    return n


def _collect_option_names(parser: argparse.ArgumentParser) -> set[str]:
    names = set()
    stack = [parser]
    while stack:
        p = stack.pop()
        for action in p._actions:
            names.update(o for o in action.option_strings if o.startswith("--"))
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
    return names


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except explore.WitnessVerificationError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
