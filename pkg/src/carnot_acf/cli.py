"""Command-line front end.  Every subcommand is a thin adapter over the library.

Exit codes: 0 pass, 1 contradicted, 2 input error, 3 inconclusive,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import FUNCTIONALS, OUTPUT_DIR_ENV, TRENDS, RunConfig, default_output_dir
from .errors import CarnotError, InvalidArgumentError, ParseError, QuadratureError
from .experiments import (SuiteSettings, overall_status, quartic_profile, reproduce_all,
                          write_reports)
from .functionals import (SignedPart, Trend, acf_j, acf_j_representation, acf_j_tilde,
                          acf_j_tilde_representation, mean_value, radial_scan, scan_monotonicity)
from .gauge import geometry_for
from .operators import g_degree, sub_laplacian

EXIT_PASS, EXIT_CONTRADICTED, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, default=str))


def _config(args) -> RunConfig:
    """Merge --config file (if any) with explicit flags; flags win."""
    base = RunConfig.load(args.config).to_dict() if getattr(args, "config", None) else {}
    overrides = {
        "group": getattr(args, "group", None),
        "poly": getattr(args, "poly", None),
        "x0": _split(args.x0) if getattr(args, "x0", None) else None,
        "radii": [float(r) for r in _split(args.radii)] if getattr(args, "radii", None) else None,
        "resolution": _resolution_arg(args.resolution) if getattr(args, "resolution", None) else None,
        "seed": getattr(args, "seed", None),
        "functional": getattr(args, "functional", None),
        "selector": getattr(args, "selector", None),
        "expect": getattr(args, "expect", None),
        "t_nodes": getattr(args, "t_nodes", None),
        "out": getattr(args, "out", None),
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig.from_dict(base)


def _split(text: str) -> list[str]:
    return [p for p in text.replace(" ", "").split(",") if p]


def _resolution_arg(text: str) -> dict:
    """JSON object, or comma-separated key=value pairs."""
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad --resolution JSON: {exc}") from exc
        return data
    out = {}
    for part in _split(text):
        if "=" not in part:
            raise ParseError(f"--resolution entry {part!r} is not key=value")
        k, v = part.split("=", 1)
        try:
            out[k] = int(v)
        except ValueError as exc:
            raise ParseError(f"--resolution value for {k} must be an integer") from exc
    return out


def evaluate_functional(cfg: RunConfig, r: float):
    """The library call behind one scan point."""
    group, u, res = cfg.group_obj(), cfg.polynomial(), cfg.resolution_obj()
    x0 = cfg.origin()
    if cfg.functional == "j":
        return acf_j(group, u, x0, r, res)
    if cfg.functional == "j_tilde":
        return acf_j_tilde(group, u, x0, r, SignedPart(cfg.selector), res)
    if cfg.functional == "mean_value":
        return mean_value(group, u, x0, r, res)
    if cfg.selector == "whole":
        return acf_j_representation(group, u, x0, r, cfg.t_nodes, res)
    return acf_j_tilde_representation(group, u, x0, r, cfg.t_nodes, SignedPart(cfg.selector), res)


def _trend_exit(report, expect: str | None) -> int:
    if expect is None:
        return EXIT_PASS
    cls = report.classification
    if cls is Trend.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS if cls.value == expect else EXIT_CONTRADICTED


# -- subcommands ------------------------------------------------------------------------


def cmd_verify_harmonic(args) -> int:
    cfg = _config(args)
    group, u = cfg.group_obj(), cfg.polynomial()
    lap = sub_laplacian(group, u)
    _emit({"polynomial": str(u), "laplacian": str(lap), "harmonic": lap.is_zero(),
           "g_degree": g_degree(u)})
    return EXIT_PASS if lap.is_zero() else EXIT_CONTRADICTED


def cmd_scan(args) -> int:
    cfg = _config(args)
    u = cfg.polynomial()
    x0 = cfg.origin() or [0.0] * cfg.group_obj().N
    scan = radial_scan(lambda r: evaluate_functional(cfg, r), cfg.radii)
    if any(e != e or e == float("inf") for e in scan.errors):
        raise QuadratureError("non-finite error estimate in scan")
    out = Path(cfg.out) if cfg.out else Path(default_output_dir()) / f"scan_{cfg.functional}.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(scan.to_csv())
    payload = {"functional": cfg.functional, "u": str(u), "u_at_x0": u.evaluate(x0),
               "csv": str(out), "radii": scan.radii, "values": scan.values, "errors": scan.errors}
    code = EXIT_PASS
    if len(scan.radii) >= 3:
        report = scan_monotonicity(scan)
        payload["monotonicity"] = report.to_dict()
        code = _trend_exit(report, cfg.expect)
    elif cfg.expect is not None:
        raise InvalidArgumentError("a trend expectation needs at least three radii")
    payload["expect"] = cfg.expect
    _emit(payload)
    return code


def cmd_mean_value(args) -> int:
    cfg = _config(args)
    group, u = cfg.group_obj(), cfg.polynomial()
    x0 = cfg.origin() or [0.0] * group.N
    rows = [{"r": r, **mean_value(group, u, x0, r, cfg.resolution_obj()).to_dict()}
            for r in cfg.radii]
    _emit({"u": str(u), "x0": x0, "u_at_x0": u.evaluate(x0), "means": rows})
    return EXIT_PASS


def cmd_fit_quartic(args) -> int:
    cfg = _config(args)
    prof = quartic_profile(args.c1, args.c2, cfg.radii, cfg.resolution_obj())
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(prof.scan.to_csv())
    _emit(prof.to_dict())
    return EXIT_PASS


def cmd_gauge_info(args) -> int:
    cfg = _config(args)
    group = cfg.group_obj()
    geom = geometry_for(group, cfg.resolution_obj())
    _emit({"group": group.to_json(), "N": group.N, "Q": group.Q,
           "dilation_weights": list(group.dilation_weights),
           "horizontal_fields": [
               {"index": f.index, "coefficients": {group.ring.names[k]: str(p)
                                                   for k, p in f.coefficients}}
               for f in group.horizontal_fields],
           "gamma_constant": geom.gamma_constant, "normalization": dict(geom.normalization_meta)})
    return EXIT_PASS


def cmd_reproduce_paper(args) -> int:
    res = _config(args).resolution_obj()
    settings = SuiteSettings(res, args.mc_samples, args.debug_gamma_scale)
    results = reproduce_all(settings)
    out = write_reports(results, args.out or default_output_dir(), settings)
    for r in results:
        print(f"{r.status.upper():13s} {r.claim_id} ({r.seconds:.2f}s)")
    status = overall_status(results)
    print(f"overall: {status}; reports in {out}")
    return {"pass": EXIT_PASS, "fail": EXIT_CONTRADICTED}.get(status, EXIT_INCONCLUSIVE)


# -- parser -----------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, *, poly=True, radii=True):
    p.add_argument("--config", help="JSON run configuration; explicit flags override it")
    p.add_argument("--group", help='"heisenberg1", "euclidean:N" or a JSON descriptor')
    if poly:
        p.add_argument("--poly", help="polynomial expression or JSON term list")
        p.add_argument("--x0", help="comma-separated base point, fractions allowed")
    if radii:
        p.add_argument("--radii", help="comma-separated increasing radii")
    p.add_argument("--resolution", help='JSON object or "radial_nodes=16,angular_nodes_phi=32"')
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=f"output path (default directory from ${OUTPUT_DIR_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carnot-acf",
                                     description="ACF functional toolkit for R^N and H^1")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-harmonic", help="exact sub-Laplacian check")
    _common(p, radii=False)
    p.set_defaults(func=cmd_verify_harmonic)

    p = sub.add_parser("scan", help="radial scan of a functional with trend classification")
    _common(p)
    p.add_argument("--functional", choices=FUNCTIONALS)
    p.add_argument("--selector", choices=("plus", "minus", "whole"))
    p.add_argument("--t-nodes", dest="t_nodes", type=int)
    p.add_argument("--expect", choices=TRENDS)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("mean-value", help="kernel-weighted sphere means")
    _common(p)
    p.set_defaults(func=cmd_mean_value)

    p = sub.add_parser("fit-quartic", help="quartic profile of a counterexample family member")
    _common(p, poly=False)
    p.add_argument("--c1", default="1")
    p.add_argument("--c2", default="0")
    p.set_defaults(func=cmd_fit_quartic)

    p = sub.add_parser("gauge-info", help="group data and the normalised constant c_Q")
    _common(p, poly=False, radii=False)
    p.set_defaults(func=cmd_gauge_info)

    p = sub.add_parser("reproduce-paper", help="run every claim and write JSON/CSV reports")
    _common(p, poly=False, radii=False)
    p.add_argument("--mc-samples", dest="mc_samples", type=int,
                   help="Monte-Carlo samples per integrand; 0 skips the Monte-Carlo oracle")
    p.add_argument("--debug-gamma-scale", dest="debug_gamma_scale", type=float, default=1.0,
                   help="multiply c_Q by this factor (sensitivity check, should fail)")
    p.set_defaults(func=cmd_reproduce_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParseError, InvalidArgumentError, CarnotError, ValueError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
