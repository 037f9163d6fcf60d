"""Batch front door: catalog inspection, classification, solving, verification
and parameter sweeps with machine-readable output.

Subcommands
-----------
catalog    print an N-function summary (indices, Delta_2 constant, conjugate
           sample table)
classify   classification report as JSON (or a one-row CSV with --format csv)
solve      run a solver and write profile CSV/JSON plus a summary
verify     run diagnostic checks on a stored profile CSV
sweep      classification over an (alpha, q) grid, one CSV row per point

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 refused by classification.  Every command is deterministic given
(config, seed); floating-point output is printed with 17 significant digits.

Growth functions are addressed as ``family:params`` on the command line
(``power:2``, ``power_sum:2,3``, ``log_perturbed:2,1,1``, ``loglog:2,0.5``)
or as nested objects in a JSON config file
(``{"family": "power_sum", "p": 2, "q": 3}``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .admissibility import ProblemSpec, Verdict, classify
from .diagnostics import (boundedness_report, degiorgi_levels,
                          pohozaev_residual, strauss_check)
from .luxemburg import NonNormableError
from .nfunction import (NFunction, catalog_parameter_names, check_delta2,
                        complementary, make_catalog, simonenko_indices)
from .quadrature import DivergentIntegralError
from .radial import (NonConvergenceError, NoBracketError, PathCollapseError,
                     NotSuperlinearError, PositivityViolationError,
                     RadialGrid, RadialProfile, SolverConfig, energy,
                     mountain_pass_solve, solve_shooting, weak_residual)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_REFUSED = 4


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _json_ready(obj):
    """Round floats through 17-significant-digit text for stable output."""
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.17g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_json_ready(obj), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# growth-function parsing
# ---------------------------------------------------------------------------

def parse_nfunction(text: str) -> NFunction:
    """Parse ``family:p1,p2,...`` into a catalog N-function."""
    if ":" not in text:
        raise ConfigError(f"growth function '{text}' must look like "
                          "'family:params', e.g. power_sum:2,3")
    family, _, params = text.partition(":")
    family = family.strip()
    try:
        values = [float(v) for v in params.split(",") if v.strip()]
        return make_catalog(family, values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def nfunction_from_config(node) -> NFunction:
    if isinstance(node, str):
        return parse_nfunction(node)
    if not isinstance(node, dict) or "family" not in node:
        raise ConfigError("growth function config needs a 'family' key")
    family = node["family"]
    try:
        names = catalog_parameter_names(family)
        values = [float(node[name]) for name in names]
        return make_catalog(family, values)
    except KeyError as exc:
        raise ConfigError(f"{family}: missing parameter {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _spec_from_args(args) -> ProblemSpec:
    cfg = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config file: {exc}") from None
    spec_cfg = cfg.get("spec", {})
    n = args.n if args.n is not None else spec_cfg.get("n")
    alpha = args.alpha if args.alpha is not None else spec_cfg.get("alpha")
    if n is None or alpha is None:
        raise ConfigError("spec.n and spec.alpha are required (flags --n/--alpha "
                          "or a config file)")
    g_node = args.g if args.g is not None else spec_cfg.get("G")
    h_node = args.h if args.h is not None else spec_cfg.get("H")
    if g_node is None or h_node is None:
        raise ConfigError("growth functions --g and --h are required")
    r_node = args.r if args.r is not None else spec_cfg.get("R")
    try:
        G = nfunction_from_config(g_node)
        H = nfunction_from_config(h_node)
        R = None if r_node is None else nfunction_from_config(r_node)
        return ProblemSpec(int(n), float(alpha), G, H, R)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from None


def _solver_config(args, cfg=None) -> SolverConfig:
    solver_cfg = (cfg or {}).get("solver", {}) if cfg else {}
    kw = dict(solver_cfg)
    if getattr(args, "eps_reg", None) is not None:
        kw["epsilon_reg"] = args.eps_reg
    if getattr(args, "tol", None) is not None:
        kw["residual_tol"] = args.tol
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    try:
        return SolverConfig(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    try:
        nf = make_catalog(args.family, [float(v) for v in args.params])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    pair = simonenko_indices(nf)
    holds, C = check_delta2(nf)
    conj = complementary(nf)
    samples = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    out = {
        "label": nf.label,
        "indices": {"p_minus": pair.p_minus, "p_plus": pair.p_plus,
                    "exact": pair.exact},
        "delta2": {"holds": holds, "constant": C},
        "conjugate_samples": [
            {"s": s, "conjugate": float(conj.G(np.array(s)))} for s in samples],
    }
    print(_dump_json(out))
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = classify(spec)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "alpha", "G", "H", "R", "verdict"] +
                   [c.name for c in report.checks])
        w.writerow([spec.n, _fmt(spec.alpha), spec.G.label, spec.H.label,
                    "" if spec.R is None else spec.R.label,
                    report.verdict.value] +
                   [c.passed for c in report.checks])
        sys.stdout.write(buf.getvalue())
    else:
        print(_dump_json(report.to_dict()))
    return EXIT_OK


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_solve(args) -> int:
    try:
        spec = _spec_from_args(args)
        cfg = _solver_config(args)
        grid = RadialGrid.graded_origin(args.grid_size)
        out_dir = Path(args.out) if args.out else Path(".")
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    report = classify(spec)
    if report.verdict is Verdict.NONEXISTENCE and not args.force:
        print("refused: the supercritical nonexistence test holds "
              "(q_minus >= n(alpha+p_plus)/(n-p_plus)), so no bounded "
              "solution exists; rerun with --force to override",
              file=sys.stderr)
        return EXIT_REFUSED

    try:
        if args.method == "shooting":
            sol = solve_shooting(spec, (args.d_min, args.d_max), grid=grid)
            profile, extra = sol.profile, {
                "d0": sol.d0, "terminal": sol.terminal,
                "brackets": sol.brackets}
        else:
            res = mountain_pass_solve(spec, cfg, grid=grid, force=True)
            profile, extra = res.profile, {
                "critical_value": res.critical_value,
                "iterations": res.iterations}
            tele = io.StringIO()
            w = csv.writer(tele, lineterminator="\n")
            w.writerow(["iteration", "max_energy", "residual", "j_max", "step"])
            for row in res.telemetry:
                w.writerow([row[0]] + [_fmt(float(v)) for v in row[1:]])
            _write(out_dir / "telemetry.csv", tele.getvalue())
    except (NoBracketError, PositivityViolationError, NonConvergenceError,
            PathCollapseError, NotSuperlinearError, DivergentIntegralError,
            NonNormableError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    residual = weak_residual(spec, profile)
    summary = {
        "spec": spec.describe(),
        "method": args.method,
        "classification": report.verdict.value,
        "residual": residual,
        "energy": energy(spec, profile),
        "sup_norm": profile.sup_norm(),
        "grid_size": grid.m,
        "seed": cfg.seed,
    }
    summary.update(extra)
    _write(out_dir / "profile.csv", profile.to_csv())
    _write(out_dir / "profile.json",
           _dump_json(profile.to_json_dict(meta=summary)))
    print(_dump_json(summary))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        spec = _spec_from_args(args)
        text = Path(args.profile).read_text()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        profile = RadialProfile.from_csv(text)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    wanted = args.checks.split(",") if args.checks else \
        ["pohozaev", "strauss", "residual", "levels"]
    out = {"profile": args.profile, "checks": {}}
    for name in wanted:
        name = name.strip()
        if name == "pohozaev":
            out["checks"]["pohozaev"] = pohozaev_residual(spec, profile).to_dict()
        elif name == "strauss":
            rep = strauss_check(spec, profile)
            out["checks"]["strauss"] = {"c_emp": rep.c_emp}
        elif name == "residual":
            out["checks"]["residual"] = weak_residual(spec, profile)
        elif name == "levels":
            levels = degiorgi_levels(spec, profile, args.levels)
            out["checks"]["levels"] = [float(v) for v in levels]
        elif name == "boundedness":
            sup, ok = boundedness_report(spec, profile)
            out["checks"]["boundedness"] = {"sup_norm": sup, "hypothesis_ok": ok}
        else:
            print(f"error: unknown check '{name}'", file=sys.stderr)
            return EXIT_CONFIG
    text_out = _dump_json(out)
    if args.out:
        _write(Path(args.out), text_out + "\n")
    print(text_out)
    return EXIT_OK


def _sweep_rows(spec_base, alphas, qs):
    """Classification rows over the (alpha, q) grid, in row-major order."""
    def one(point):
        alpha, q = point
        spec = ProblemSpec(spec_base.n, float(alpha), spec_base.G,
                           make_catalog("power", [q]), spec_base.R)
        report = classify(spec)
        integral = report.check("admissibility_integral")
        kind, metric = report.integral_estimate or ("slope", float("nan"))
        return [
            _fmt(float(alpha)), _fmt(float(q)), report.verdict.value,
            report.check("superlinearity").passed,
            report.check("h_much_smaller_than_r").passed,
            integral.evidence.get("verdict"),
            _fmt(float(metric)),
            report.check("supercritical_nonexistence").passed,
        ]
    return one


def cmd_sweep(args) -> int:
    try:
        spec = _spec_from_args(args)
        alphas = _parse_range(args.alpha_range)
        qs = _parse_range(args.q_range)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    points = [(a, q) for a in alphas for q in qs]
    one = _sweep_rows(spec, alphas, qs)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "q", "verdict", "superlinearity",
                "h_much_smaller_than_r", "integral_verdict", "integral_metric",
                "nonexistence"])
    w.writerows(rows)
    if args.out:
        _write(Path(args.out), buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _parse_range(text: str) -> np.ndarray:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ConfigError(f"range '{text}' must look like lo:hi:count") from None
    if count < 1 or hi < lo:
        raise ConfigError(f"range '{text}' is empty")
    return np.linspace(lo, hi, count)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="space dimension")
    p.add_argument("--alpha", type=float, default=None, help="weight exponent")
    p.add_argument("--g", type=str, default=None,
                   help="gradient growth, family:params")
    p.add_argument("--h", type=str, default=None,
                   help="nonlinearity growth, family:params")
    p.add_argument("--r", type=str, default=None,
                   help="comparison growth, family:params")
    p.add_argument("--config", type=str, default=None,
                   help="JSON config file mirroring the spec fields")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="henon-orlicz",
        description="Orlicz-growth Henon toolkit: classification, radial "
                    "solvers and identity-based diagnostics.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="inspect a catalog growth function")
    p.add_argument("family")
    p.add_argument("params", nargs="*", type=float)
    p.add_argument("--p", dest="params_p", type=float, default=None)
    p.add_argument("--q", dest="params_q", type=float, default=None)
    p.add_argument("--r", dest="params_r", type=float, default=None)
    p.add_argument("--s", dest="params_s", type=float, default=None)
    p.set_defaults(func=_catalog_dispatch)

    p = sub.add_parser("classify", help="classification report")
    _add_spec_flags(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="compute a positive radial solution")
    _add_spec_flags(p)
    p.add_argument("--method", choices=["shooting", "mountain-pass"],
                   default="shooting")
    p.add_argument("--grid-size", type=int, default=256)
    p.add_argument("--eps-reg", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d-min", type=float, default=0.5)
    p.add_argument("--d-max", type=float, default=64.0)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--force", action="store_true",
                   help="solve even when classification does not guarantee "
                        "existence")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="diagnostic checks on a profile CSV")
    _add_spec_flags(p)
    p.add_argument("--profile", required=True)
    p.add_argument("--checks", type=str, default=None,
                   help="comma list: pohozaev,strauss,residual,levels,"
                        "boundedness (default: first four)")
    p.add_argument("--levels", type=int, default=20)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="classification over an (alpha, q) grid")
    _add_spec_flags(p)
    p.add_argument("--alpha-range", required=True, help="lo:hi:count")
    p.add_argument("--q-range", required=True, help="lo:hi:count")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_sweep)
    return ap


def _catalog_dispatch(args) -> int:
    named = [("p", args.params_p), ("q", args.params_q),
             ("r", args.params_r), ("s", args.params_s)]
    if not args.params:
        try:
            wanted = catalog_parameter_names(args.family)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        by_name = dict(named)
        missing = [w for w in wanted if by_name.get(w) is None]
        if missing:
            print(f"error: {args.family} needs parameters {wanted}; "
                  f"missing {missing}", file=sys.stderr)
            return EXIT_CONFIG
        args.params = [by_name[w] for w in wanted]
    return cmd_catalog(args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
