"""Command-line interface.

Subcommands:
    list      registered model families and their parameters
    curve     moment curve h, v, u, r1, r2 over the analysis grid (CSV/JSON)
    estimate  regular-variation indices of h, v, u plus the tail index (JSON)
    verify    full theorem consistency report (JSON)

Exit codes: 0 success (verify: consistent), 1 usage or computation error
(including inadmissible models), 2 verify found a contradiction, 3 verify
could not classify the regime.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, fields

import numpy as np

from .asymptotics import estimate_rv_index
from .catalog import MODEL_REGISTRY, _REQUIRED, build_model
from .errors import InsufficientDataError, TailMomentsError
from .moments import build_curve, curve_to_csv
from .params import AnalysisParams
from .verifier import verify

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCONSISTENT = 2
EXIT_INDETERMINATE = 3


def _json_safe(obj):
    """Recursively make an object JSON-serializable, encoding non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_json_safe(float(v)) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    return obj


def render_json(obj) -> str:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True,
                      allow_nan=False) + "\n"


def _write_output(text: str, path: str | None) -> None:
    """Write to stdout, or atomically replace the target file."""
    if path is None:
        sys.stdout.write(text)
        return
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target),
                               prefix=".tailmoments-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _parse_model_params(pairs: list[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise TailMomentsError(
                f"--param expects key=value, got {pair!r}")
        out[key] = value
    return out


def _add_model_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dist", required=True,
                     help="model family name (see 'list')")
    sub.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                     help="model parameter, repeatable")


def _add_analysis_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--beta", type=float, required=True,
                     help="moment order, must be positive")
    sub.add_argument("--x-min", type=float, default=1.0)
    sub.add_argument("--x-max", type=float, default=1e12)
    sub.add_argument("--points-per-decade", type=int, default=16)
    sub.add_argument("--lambda", dest="lambdas", type=float, action="append",
                     metavar="LAMBDA",
                     help="scale factor for index estimation, repeatable "
                          "(default: 2, e, 3, 8)")
    sub.add_argument("--rel-tol", type=float, default=1e-10)
    sub.add_argument("--eps-rho", type=float, default=0.02)
    sub.add_argument("--window-decades", type=float, default=3.0)
    sub.add_argument("--spread-tol", type=float, default=0.02)
    sub.add_argument("--trend-tol", type=float, default=0.01)


def _params_from_args(args: argparse.Namespace) -> AnalysisParams:
    kwargs = dict(beta=args.beta, x_min=args.x_min, x_max=args.x_max,
                  points_per_decade=args.points_per_decade,
                  rel_tol=args.rel_tol, eps_rho=args.eps_rho,
                  window_decades=args.window_decades,
                  spread_tol=args.spread_tol, trend_tol=args.trend_tol)
    if args.lambdas:
        kwargs["lambdas"] = tuple(args.lambdas)
    return AnalysisParams(**kwargs)


def _params_dict(params: AnalysisParams) -> dict:
    return {f.name: getattr(params, f.name) for f in fields(params)}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailmoments",
        description="Truncated-moment laboratory for heavy-tailed models")
    subs = parser.add_subparsers(dest="command", required=True)

    p_list = subs.add_parser("list", help="list registered model families")
    p_list.add_argument("--format", choices=("json", "text"), default="text")

    p_curve = subs.add_parser("curve", help="tabulate h, v, u, r1, r2")
    _add_model_args(p_curve)
    _add_analysis_args(p_curve)
    p_curve.add_argument("--format", choices=("csv", "json"), default="csv")
    p_curve.add_argument("--output", default=None, metavar="PATH")

    p_est = subs.add_parser("estimate",
                            help="regular-variation indices of h, v, u")
    _add_model_args(p_est)
    _add_analysis_args(p_est)
    p_est.add_argument("--output", default=None, metavar="PATH")

    p_ver = subs.add_parser("verify", help="full theorem consistency report")
    _add_model_args(p_ver)
    _add_analysis_args(p_ver)
    p_ver.add_argument("--output", default=None, metavar="PATH")
    return parser


def _cmd_list(args: argparse.Namespace) -> int:
    entries = {}
    for name, (_, sig) in sorted(MODEL_REGISTRY.items()):
        entries[name] = {key: ("required" if default is _REQUIRED else default)
                         for key, default in sig.items()}
    if args.format == "json":
        _write_output(render_json(entries), None)
    else:
        for name, sig in entries.items():
            if sig:
                rendered = ", ".join(f"{k}={v}" for k, v in sig.items())
                print(f"{name}: {rendered}")
            else:
                print(f"{name}: (no parameters)")
    return EXIT_OK


def _cmd_curve(args: argparse.Namespace) -> int:
    model = build_model(args.dist, **_parse_model_params(args.param))
    params = _params_from_args(args)
    curve = build_curve(model, params)
    if args.format == "csv":
        text = curve_to_csv(curve)
    else:
        text = render_json({
            "model": curve.model_name,
            "beta": curve.beta,
            "params": _params_dict(params),
            "columns": {"x": curve.grid, "h": curve.h, "v": curve.v,
                        "u": curve.u, "r1": curve.r1, "r2": curve.r2,
                        "quad_error": curve.quad_error},
        })
    _write_output(text, args.output)
    return EXIT_OK


def _estimate_entry(curve, values, params) -> dict:
    try:
        est = estimate_rv_index(curve.grid, values, params)
    except InsufficientDataError as exc:
        return {"error": str(exc)}
    return {"rho_hat": est.rho_hat, "converged": est.converged,
            "spread": est.spread, "trend": est.trend,
            "window": list(est.window), "n_points": len(est.per_scale)}


def _cmd_estimate(args: argparse.Namespace) -> int:
    model = build_model(args.dist, **_parse_model_params(args.param))
    params = _params_from_args(args)
    curve = build_curve(model, params)
    ests = {"h": _estimate_entry(curve, curve.h, params),
            "v": _estimate_entry(curve, curve.v, params),
            "u": _estimate_entry(curve, curve.u, params)}
    tail_index = (ests["u"]["rho_hat"] - params.beta
                  if "rho_hat" in ests["u"] else None)
    text = render_json({"model": curve.model_name, "beta": params.beta,
                        "params": _params_dict(params), "estimates": ests,
                        "tail_index": tail_index})
    _write_output(text, args.output)
    return EXIT_OK


def _condition_dict(cond) -> dict:
    return {"verdict": cond.verdict, "estimate": cond.estimate,
            "spread": cond.spread}


def _cmd_verify(args: argparse.Namespace) -> int:
    model = build_model(args.dist, **_parse_model_params(args.param))
    params = _params_from_args(args)
    report = verify(model, params)
    pi = None
    if report.pi_result is not None:
        pi = {"is_member": report.pi_result.is_member,
              "c_hat": report.pi_result.c_hat,
              "max_residual_rel": report.pi_result.max_residual_rel,
              "n_skipped": report.pi_result.n_skipped,
              "window": list(report.pi_result.window),
              "ell_index_hat": report.pi_result.ell_index_hat}
    text = render_json({
        "model": report.model_name,
        "beta": report.beta,
        "regime": report.regime,
        "conditions": {
            "h_rv": _condition_dict(report.cond_h_rv),
            "v_rv": _condition_dict(report.cond_v_rv),
            "f_rv": _condition_dict(report.cond_f_rv),
            "lim1": _condition_dict(report.cond_lim1),
            "lim2": _condition_dict(report.cond_lim2),
        },
        "gamma": asdict(report.gamma),
        "pi": pi,
        "consistent": report.consistent,
        "violations": list(report.violations),
        "params": _params_dict(params),
    })
    _write_output(text, args.output)
    if report.consistent is None:
        return EXIT_INDETERMINATE
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    handlers = {"list": _cmd_list, "curve": _cmd_curve,
                "estimate": _cmd_estimate, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except TailMomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
