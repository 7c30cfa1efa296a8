"""Command-line interface.

Subcommands: ``test`` (test a data file against a null family),
``constants`` (evaluate tabulated integrals), ``matrices`` (dump G/R/J and
the scaling covariance as JSON), ``power`` (asymptotic power curves, with
optional finite-n validation), ``ellipse`` (confidence-ellipse boundary
points as CSV) and ``study`` (run a declarative Monte-Carlo study).

Exit codes: 0 success, 2 data or numeric failure, 64 usage error.  The
environment variable TRIGOF_SEED supplies the default seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import families, gof, power, quadrature, scaling, simharness
from .errors import TrigofError
from .estimate import EstimatorKind, KnownMask

USAGE_EXIT = 64
DATA_EXIT = 2


class _UsageError(Exception):
    pass


def _resolve_family(name, theta_text=None):
    """Family lookup and arity validation are usage errors, not data errors."""
    try:
        fam = families.get_family(name)
    except TrigofError as exc:
        raise _UsageError(str(exc))
    if theta_text is not None:
        values = [v for v in theta_text.split(",") if v.strip()]
        if len(values) != fam.n_params:
            raise _UsageError(
                f"{fam.name} takes {fam.n_params} parameter(s) "
                f"{fam.param_names}, got {len(values)}")
    return fam


def _default_seed() -> int:
    return int(os.environ.get("TRIGOF_SEED", "0"))


def _fmt(value, digits):
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    return value


def _round_obj(obj, digits):
    if isinstance(obj, float):
        return _fmt(obj, digits)
    if isinstance(obj, dict):
        return {k: _round_obj(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_obj(v, digits) for v in obj]
    return obj


def read_data(path) -> np.ndarray:
    """One numeric value per line; '#' starts a comment; no header."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                values.append(float(body))
            except ValueError:
                raise TrigofError(f"{path}:{lineno}: not a number: {body!r}")
    if not values:
        raise TrigofError(f"{path}: no data values found")
    return np.asarray(values)


def _parse_known(pairs):
    out = {}
    for chunk in pairs or []:
        name, sep, value = chunk.partition("=")
        if not sep:
            raise ValueError(f"--known expects name=value, got {chunk!r}")
        out[name.strip()] = float(value)
    return out


def _parse_grid(text):
    """'lo:hi:step' or a comma list."""
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        n = int(round((hi - lo) / step)) + 1
        return [lo + i * step for i in range(n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_test(args) -> int:
    fam = _resolve_family(args.family)
    x = read_data(args.data)
    bindings = _parse_known(args.known)
    mask = KnownMask.from_names(fam, bindings) if bindings else None
    mc = {"reps": args.mc_reps, "seed": args.seed} if args.mc_reps else None
    res = gof.run_test(fam, args.estimator, mask, x, mc=mc)
    payload = {
        "family": res.family,
        "estimator": res.kind,
        "n": res.moments.n,
        "param_names": list(fam.param_names),
        "theta": [float(v) for v in res.fit.theta],
        "known": bindings,
        "n_estimated": fam.n_params - len(bindings),
        "converged": res.fit.converged,
        "iterations": res.fit.iterations,
        "residual": res.fit.residual,
        "c_n": res.moments.cn,
        "s_n": res.moments.sn,
        "sigma": [[float(v) for v in row] for row in res.sigma],
        "t_n": res.tn,
        "p_chi2": res.p_chi2,
        "z_c": res.zc,
        "z_s": res.zs,
        "alpha": args.alpha,
        "rejected": bool(res.p_chi2 < args.alpha),
    }
    if res.p_mc is not None:
        payload.update({"p_mc": res.p_mc, "mc_reps": res.mc_reps,
                        "mc_exceed": res.mc_exceed, "mc_failed": res.mc_failed})
    _emit(json.dumps(_round_obj(payload, args.digits), indent=2), args.output)
    return 0


def cmd_constants(args) -> int:
    digits = args.digits
    if args.logistic:
        c_cos, c_sin, m_cos, m_sin = quadrature.logistic_constants()
        _emit(json.dumps(_round_obj({
            "c_cos": c_cos, "c_sin": c_sin, "m_cos": m_cos, "m_sin": m_sin,
        }, digits), indent=2), args.output)
        return 0
    if args.h is None:
        raise ValueError("constants needs --h IDX or --logistic")
    h_args = [float(v) for v in args.args.split(",")] if args.args else []
    value = quadrature.h(args.h, *h_args)
    _emit(f"{value:.{digits}g}", args.output)
    return 0


def _matrix_payload(fam, kind, theta, bindings, digits):
    mask = KnownMask.from_names(fam, bindings) if bindings else None
    ms = scaling.matrices(fam, kind, theta)
    sig = scaling.sigma(ms, mask, kind, fam)
    return {
        "family": families.get_family(fam).name,
        "estimator": EstimatorKind(kind).value,
        "theta": [float(v) for v in theta],
        "known": bindings,
        "matrix_params": list(ms.param_names),
        "G": _round_obj(ms.G.tolist(), digits),
        "R": _round_obj(ms.R.tolist(), digits),
        "J": _round_obj(ms.J.tolist(), digits),
        "sigma": _round_obj(sig.tolist(), digits),
    }


def cmd_matrices(args) -> int:
    if args.verify:
        with open(args.verify) as fh:
            stored = json.load(fh)
        ms = scaling.MatrixSet(np.asarray(stored["G"]), np.asarray(stored["R"]),
                               np.asarray(stored["J"]), tuple(stored["matrix_params"]))
        mask = (KnownMask.from_names(stored["family"], stored["known"])
                if stored["known"] else None)
        sig = scaling.sigma(ms, mask, stored["estimator"], stored["family"])
        same = np.array_equal(np.asarray(stored["sigma"], dtype=float), sig)
        _emit(json.dumps({"sigma": sig.tolist(), "matches_stored": bool(same)},
                         indent=2), args.output)
        return 0 if same else DATA_EXIT
    if not args.family or not args.theta:
        raise _UsageError("matrices needs --family and --theta")
    fam = _resolve_family(args.family, args.theta)
    theta = [float(v) for v in args.theta.split(",")]
    payload = _matrix_payload(fam, args.estimator, theta,
                              _parse_known(args.known), args.digits)
    _emit(json.dumps(payload, indent=2), args.output)
    return 0


def cmd_power(args) -> int:
    case = power.AltCase(args.case)
    kind = EstimatorKind(args.estimator)
    if case is power.AltCase.GAMMA_VS_GG:
        theta0 = (args.lambda0, 1.0)
        deltas = _parse_grid(args.delta or "0:30:0.5")
        grid = [(d,) for d in deltas]
    elif case is power.AltCase.WEIBULL_VS_GG:
        theta0 = (1.0, 1.0)
        deltas = _parse_grid(args.delta or "0:40:0.5")
        grid = [(d,) for d in deltas]
    else:
        theta0 = (args.lambda0, 0.0, 1.0)
        if args.delta2 is not None:
            grid = [(0.0, d) for d in _parse_grid(args.delta2)]
        else:
            grid = [(d, 0.0) for d in _parse_grid(args.delta or "0:3.5:0.05")]
    points = power.power_curve(case, theta0, grid, args.alpha, kind)
    rows = []
    for pt in points:
        row = {"ncp": pt.ncp, "power": pt.power}
        if case is power.AltCase.EPD_VS_APD:
            row = {"delta1": pt.delta[0], "delta2": pt.delta[1], **row}
        else:
            row = {"delta": pt.delta[0], **row}
        if args.empirical:
            n, reps = (int(v) for v in args.empirical.split(","))
            alt = power.LocalAlternative(case, theta0, pt.delta, kind, args.alpha)
            emp = power.empirical_power(alt, n, reps, args.seed)
            row.update({"empirical": emp["rate"], "asymptotic": pt.power,
                        "failed": emp["failed"]})
        rows.append(row)
    out = []
    fields = list(rows[0])
    out.append(",".join(fields))
    for row in rows:
        out.append(",".join(f"{_fmt(row[k], args.digits)}" for k in fields))
    _emit("\n".join(out), args.output)
    return 0


def cmd_ellipse(args) -> int:
    fam = _resolve_family(args.family, args.theta if args.theta else None)
    bindings = _parse_known(args.known)
    mask = KnownMask.from_names(fam, bindings) if bindings else None
    point = None
    if args.input:
        x = read_data(args.input)
        res = gof.run_test(fam, args.estimator, mask, x)
        sig = res.sigma
        point = (math.sqrt(res.moments.n) * res.moments.cn,
                 math.sqrt(res.moments.n) * res.moments.sn)
    else:
        if not args.theta:
            raise ValueError("ellipse needs --theta or --input")
        theta = [float(v) for v in args.theta.split(",")]
        sig = scaling.sigma_from(fam, args.estimator, theta, mask)
    geom = gof.ellipse(sig, args.level)
    lines = ["kind,x,y"]
    d = args.digits
    for bx, by in geom.boundary:
        lines.append(f"boundary,{_fmt(float(bx), d)},{_fmt(float(by), d)}")
    for s in (1.0, -1.0):
        lines.append(f"x_threshold,{_fmt(s * geom.x_threshold, d)},")
        lines.append(f"y_threshold,,{_fmt(s * geom.y_threshold, d)}")
    if point is not None:
        lines.append(f"observed,{_fmt(point[0], d)},{_fmt(point[1], d)}")
    _emit("\n".join(lines), args.output)
    return 0


def cmd_study(args) -> int:
    cfg = simharness.load_config(args.config)
    if args.seed is not None:
        cfg = simharness.StudyConfig(cfg.cells, cfg.reps, cfg.alpha, args.seed,
                                     cfg.workers)
    report = simharness.run_study(cfg)
    prefix = args.output_prefix or "study"
    simharness.write_report(report, csv_path=prefix + ".csv",
                            json_path=prefix + ".json")
    for cell in report.cells:
        status = "ok" if cell.ok else "FLAGGED"
        print(f"{cell.name}: rate={cell.rate:.4f} se={cell.se:.4f} "
              f"failed={cell.failed} [{status}]")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigof",
        description="Omnibus goodness-of-fit tests from trigonometric moments "
                    "of probability-integral-transformed data.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--digits", type=int, default=17,
                       help="significant digits in numeric output (default 17)")
        p.add_argument("--output", help="write output to this file instead of stdout")
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="RNG seed (default: TRIGOF_SEED or 0)")

    p = sub.add_parser("test", help="test a data file against a null family")
    p.add_argument("data", help="text file, one numeric value per line ('#' comments)")
    p.add_argument("--family", required=True)
    p.add_argument("--estimator", choices=["ml", "mm"], default="ml")
    p.add_argument("--known", action="append", metavar="NAME=VALUE",
                   help="fix a parameter at a known value (repeatable)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mc-reps", type=int, default=0,
                   help="bootstrap replications for the Monte-Carlo p-value "
                        "(0 = asymptotic only; 10000 is a desk-scale choice)")
    add_common(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("constants", help="evaluate tabulated integral constants")
    p.add_argument("--h", type=int, help="index of the integral (1..37)")
    p.add_argument("--args", help="comma-separated arguments for the integral")
    p.add_argument("--logistic", action="store_true",
                   help="recompute the four logistic matrix constants")
    add_common(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("matrices", help="dump G/R/J and the scaling covariance")
    p.add_argument("--family")
    p.add_argument("--theta", help="comma-separated parameter values")
    p.add_argument("--estimator", choices=["ml", "mm"], default="ml")
    p.add_argument("--known", action="append", metavar="NAME=VALUE")
    p.add_argument("--verify", metavar="JSON",
                   help="re-ingest a matrices JSON dump and reproduce sigma")
    add_common(p)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("power", help="asymptotic power under local alternatives")
    p.add_argument("--case", choices=["gamma", "weibull", "epd"], required=True)
    p.add_argument("--lambda0", type=float, default=1.0,
                   help="null shape (gamma and epd cases)")
    p.add_argument("--estimator", choices=["ml", "mm"], default="ml")
    p.add_argument("--delta", help="drift grid 'lo:hi:step' or comma list")
    p.add_argument("--delta2", help="EPD case: grid over the second drift "
                                    "coordinate with the first fixed at 0")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--empirical", metavar="N,REPS",
                   help="append finite-n empirical power at each grid point")
    add_common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("ellipse", help="confidence-ellipse boundary as CSV")
    p.add_argument("--family", required=True)
    p.add_argument("--theta", help="parameters at which to evaluate the covariance")
    p.add_argument("--input", help="data file: fit first, also emit the observed point")
    p.add_argument("--estimator", choices=["ml", "mm"], default="ml")
    p.add_argument("--known", action="append", metavar="NAME=VALUE")
    p.add_argument("--level", type=float, default=0.95)
    add_common(p)
    p.set_defaults(func=cmd_ellipse)

    p = sub.add_parser("study", help="run a declarative Monte-Carlo study")
    p.add_argument("--config", required=True, help="INI study configuration")
    p.add_argument("--output-prefix", help="prefix for the CSV/JSON report files")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (TrigofError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
