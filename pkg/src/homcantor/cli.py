"""Command-line front end: ``homcantor <command> [options]``.

Every command builds a list of records (dicts) that one of three renderers
writes out.  Rationals print as ``p/q``; reals carry an explicit error.  The
effective configuration is echoed with every run, and a JSON output file is
itself accepted by ``--config`` so a run can be replayed exactly.
"""
from __future__ import annotations

import argparse
import csv
import enum
import json
import math
import random
import sys
from fractions import Fraction
from typing import Callable

from mpmath import mp, mpf

from . import critical as crit
from . import densities as dens
from . import measure as meas
from . import oracle as orc
from .core import (
    DEFAULT_PRECISION,
    Estimate,
    EventuallyPeriodicCoding,
    Params,
    format_coding,
    format_digits,
    parse_coding,
)
from .errors import HomCantorError
from .thue_morse import TMKind, prefix

DIGITS = 20


class UsageError(Exception):
    """Bad argument value discovered after parsing; exits with status 2."""


# -- argument types ---------------------------------------------------------------


def rational(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def positive_rational(text: str) -> Fraction:
    q = rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return q


def int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = str(text).partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}")
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _coding_arg(text: str, p: Params) -> EventuallyPeriodicCoding:
    try:
        return parse_coding(text, p.N)
    except ValueError as exc:
        raise UsageError(f"bad coding {text!r}: {exc}")


def _point_arg(text: str, p: Params):
    text = str(text)
    if "=" in text:
        return _coding_arg(text, p)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected a rational or a coding literal, got {text!r}")


# -- value rendering ----------------------------------------------------------------


def _real_estimate(v, p: Params) -> Estimate:
    if isinstance(v, Estimate):
        return v
    v = mpf(v)
    return Estimate(v, abs(v) * p.rel_eps)


def _scalar(v, p: Params):
    """Convert a value into str/int/bool/dict for output."""
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, enum.Enum):
        return v.value
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, EventuallyPeriodicCoding):
        return format_coding(v, p.N)
    if isinstance(v, meas.MeasureValue):
        if v.exact is not None:
            return _scalar(v.exact, p)
        return {"lo": _scalar(v.lo, p), "hi": _scalar(v.hi, p)}
    if isinstance(v, float):
        v = mpf(v)
    if isinstance(v, (mpf, Estimate)):
        e = _real_estimate(v, p)
        return {"value": mp.nstr(e.value, DIGITS), "err": mp.nstr(e.err, 3)}
    return str(v)


def _text_cell(v) -> str:
    if isinstance(v, dict):
        if "value" in v:
            return f"{v['value']} ± {v['err']}"
        return f"[{v['lo']},{v['hi']}]"
    return str(v)


def _flat(record: dict) -> dict:
    out = {}
    for key, v in record.items():
        if isinstance(v, dict):
            for sub, w in v.items():
                out[key if sub == "value" else f"{key}_{sub}"] = w
        else:
            out[key] = v
    return out


def render(rows: list[dict], config: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump({"config": config, "rows": rows}, out, indent=2)
        out.write("\n")
        return
    echo = " ".join(f"{k}={v}" for k, v in config.items() if v is not None)
    out.write(f"# {echo}\n")
    if fmt == "csv":
        flat = [_flat(r) for r in rows]
        fields = list(dict.fromkeys(k for r in flat for k in r))
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(flat)
        return
    if len(rows) == 1:
        width = max(len(k) for k in rows[0])
        for k, v in rows[0].items():
            out.write(f"{k.ljust(width)}  {_text_cell(v)}\n")
        return
    fields = list(dict.fromkeys(k for r in rows for k in r))
    cells = [[_text_cell(r.get(k, "")) for k in fields] for r in rows]
    widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
    out.write("  ".join(f.ljust(w) for f, w in zip(fields, widths)).rstrip() + "\n")
    for c in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(c, widths)).rstrip() + "\n")


# -- commands ---------------------------------------------------------------------


def cmd_sequences(a, p):
    w = prefix(TMKind(a.kind), p, a.n)
    base = 2 if a.kind == "tau" else p.N
    return [{"kind": a.kind, "n": a.n, "digits": format_digits(w, base)}]


def cmd_cdf(a, p):
    t = a.t
    return [{"t": t, "cdf": meas.cdf(t, p, a.tol)}]


def cmd_ball(a, p):
    x = _point_arg(a.x, p)
    xv = meas.as_point(x, p)
    return [{"x": xv, "r": a.r, "measure": meas.ball_measure(xv, a.r, p, a.tol),
             "ratio": _ratio_estimate(meas.density_ratio(xv, a.r, p, a.tol))}]


def _ratio_estimate(ri: meas.RealInterval) -> Estimate:
    return Estimate.between(ri.lo, ri.hi)


def cmd_density(a, p):
    c = _coding_arg(a.point, p)
    rep = dens.density_report(c, p)
    w = rep.upper_witness
    return [{
        "point": c,
        "x": meas.project(c, p),
        "lower": rep.lower,
        "upper": rep.upper,
        "gamma_liminf": rep.gamma_liminf,
        "eta_liminf": rep.eta_liminf,
        "upper_branch": w.branch,
        "witness_n_mod_period": w.n_mod_period,
        "witness_hat_digit": w.hat_digit,
        "witness_eta": w.eta,
    }]


def cmd_profile(a, p):
    c = _coding_arg(a.point, p)
    if a.samples < 1 or a.r_min > a.r_max:
        raise UsageError("need samples >= 1 and r_min <= r_max")
    xv = meas.project(c, p)
    lo, hi = math.log(a.r_min), math.log(a.r_max)
    rows = []
    for j in range(a.samples):
        frac = j / (a.samples - 1) if a.samples > 1 else 0.0
        r = a.r_min if j == 0 else a.r_max if j == a.samples - 1 else Fraction(math.exp(lo + frac * (hi - lo)))
        ri = meas.density_ratio(xv, r, p, a.tol)
        # the pair is itself an enclosure, so no separate error column
        rows.append({"r": r, "ratio_lo": mp.nstr(ri.lo, DIGITS), "ratio_hi": mp.nstr(ri.hi, DIGITS)})
    return rows


def _critical_record(p: Params, tol) -> dict:
    row = crit.critical_row(p, tol)
    return {"N": p.N, "rho": p.rho, "lo_min": row.lo_min, "a_c": row.a_c,
            "lo_max": row.lo_max, "up_min": row.up_min, "b_c": row.b_c}


def cmd_critical(a, p):
    return [_critical_record(p, a.tol)]


def cmd_critical_table(a, p):
    lo, hi = a.N_range
    return [_critical_record(Params(N, Fraction(1, N * N), p.precision), a.tol) for N in range(lo, hi + 1)]


def cmd_classify(a, p):
    fn = crit.classify_lower if a.side == "lower" else crit.classify_upper
    try:
        result = fn(a.value, p, a.tol)
    except ValueError as exc:
        if isinstance(exc, HomCantorError):
            raise
        raise UsageError(str(exc))
    record = {"side": a.side, "value": a.value, "tag": result.tag}
    for k, v in result.thresholds.items():
        if not k.endswith("_err"):
            err = result.thresholds.get(f"{k}_err")
            record[k] = Estimate(v, err) if err is not None else v
    return [record]


def cmd_admissible(a, p):
    d = _coding_arg(a.d, p)
    alpha = _coding_arg(a.alpha, p)
    cond = crit.AdmissibilityCondition(alpha, crit.Mode(a.mode))
    return [{"mode": a.mode, "d": d, "alpha": alpha, "admissible": cond.admits(d, p)}]


def cmd_sft_bound(a, p):
    if a.n < 1:
        raise UsageError("n must be at least 1")
    return [{"n": a.n, "spectral_radius": crit.spectral_radius_mp(p),
             "dim_lower_bound": crit.sft_dim_lower_bound(a.n, p)}]


def _verify_measure(p: Params, rng: random.Random, seed: int) -> tuple[bool, float]:
    ok = meas.check_cdf_bounds(p, 500, seed) and meas.check_self_similarity(p, 100, seed)
    worst = 0.0
    for _ in range(50):
        x = meas.random_point_of_E(rng, p, 12)
        r = Fraction(rng.randint(1, 1 << 20), 1 << 22)
        ref = meas.ball_measure(x, r, p)
        cover = orc.oracle_ball_measure(x, r, orc._scale_of(r, p) + 12, p).enclosure()
        ok &= cover.overlaps(ref)
        worst = max(worst, float(abs(cover.mid - ref.mid)))
    return ok, worst


def _verify_density(p: Params, rng: random.Random, seed: int) -> tuple[bool, float]:
    worst = 0.0
    for _ in range(5):
        c = orc.random_eventually_periodic(rng, p)
        rep = dens.density_report(c, p)
        lo = orc.oracle_lower_density(c, p, grid=8)
        up = orc.oracle_upper_density(c, p, grid=8)
        worst = max(worst, float(abs(lo.lo - rep.lower)), float(abs(up.hi - rep.upper)))
    return worst <= 5e-3, worst


def _verify_critical(p: Params, rng: random.Random, seed: int) -> tuple[bool, float]:
    row = crit.critical_row(p)
    d1 = abs(row.a_c.value - crit.a_from_t_gamma(crit.t_gamma(p), p).value)
    d2 = abs(row.b_c.value - crit.b_from_t_eta(crit.t_eta(p), p).value)
    bounds = dens.density_bounds(p)
    chain = row.lo_min < row.a_c.value < row.lo_max < row.up_min < row.b_c.value < bounds.up_max
    return chain and max(d1, d2) <= 1e-10, float(max(d1, d2))


SUITES: dict[str, Callable] = {
    "measure": _verify_measure,
    "density": _verify_density,
    "critical": _verify_critical,
}


def cmd_verify(a, p):
    names = list(SUITES) if a.suite == "all" else [a.suite]
    rows = []
    for name in names:
        ok, worst = SUITES[name](p, random.Random(a.seed), a.seed)
        rows.append({"suite": name, "result": "PASS" if ok else "FAIL", "worst_discrepancy": f"{worst:.3e}"})
    return rows


# -- parser -------------------------------------------------------------------------

BUILTIN = {
    "N": 2,
    "rho": None,  # 1/N^2
    "precision": DEFAULT_PRECISION,
    "format": "text",
    "seed": 0,
}

COMMANDS = {
    "sequences": (cmd_sequences, {"tol": None}),
    "cdf": (cmd_cdf, {"tol": meas.DEFAULT_TOL}),
    "ball": (cmd_ball, {"tol": meas.DEFAULT_TOL}),
    "density": (cmd_density, {"tol": None}),
    "profile": (cmd_profile, {"tol": meas.DEFAULT_TOL, "samples": 64}),
    "critical": (cmd_critical, {"tol": crit.DEFAULT_TOL}),
    "critical-table": (cmd_critical_table, {"tol": crit.DEFAULT_TOL, "N_range": (2, 8)}),
    "classify": (cmd_classify, {"tol": crit.DEFAULT_TOL}),
    "admissible": (cmd_admissible, {"tol": None}),
    "sft-bound": (cmd_sft_bound, {"tol": None, "n": 1}),
    "verify": (cmd_verify, {"tol": None, "suite": "all"}),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="alphabet size (default 2)")
    common.add_argument("--rho", type=rational, help="contraction ratio p/q (default 1/N^2)")
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--format", choices=["text", "csv", "json"])
    common.add_argument("--tol", type=positive_rational, help="target tolerance")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="key=value file (or a previous JSON output); flags win")

    parser = argparse.ArgumentParser(prog="homcantor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sequences", parents=[common], help="lambda / theta / tau prefixes")
    s.add_argument("--kind", choices=[k.value for k in TMKind])
    s.add_argument("--n", type=int)

    s = sub.add_parser("cdf", parents=[common], help="mu([0, t])")
    s.add_argument("--t", type=rational)

    s = sub.add_parser("ball", parents=[common], help="mu(B(x, r)) and the density ratio")
    s.add_argument("--x", help="rational or coding literal pre=..;per=..")
    s.add_argument("--r", type=positive_rational)

    s = sub.add_parser("density", parents=[common], help="lower/upper densities at a coded point")
    s.add_argument("--point", help="coding literal pre=..;per=..")

    s = sub.add_parser("profile", parents=[common], help="CSV of r, ratio_lo, ratio_hi")
    s.add_argument("--point")
    s.add_argument("--r-min", type=positive_rational)
    s.add_argument("--r-max", type=positive_rational)
    s.add_argument("--samples", type=int)

    sub.add_parser("critical", parents=[common], help="one row of critical values")

    s = sub.add_parser("critical-table", parents=[common], help="critical values for rho = 1/N^2")
    s.add_argument("--N-range", type=int_range)

    s = sub.add_parser("classify", parents=[common], help="size of a density level set")
    s.add_argument("--side", choices=["lower", "upper"])
    s.add_argument("--value", help="real number, p/q, or the symbol a_c / b_c")

    s = sub.add_parser("admissible", parents=[common], help="symbolic admissibility check")
    s.add_argument("--mode", choices=[m.value for m in crit.Mode])
    s.add_argument("--d")
    s.add_argument("--alpha")

    s = sub.add_parser("sft-bound", parents=[common], help="subshift dimension lower bound")
    s.add_argument("--n", type=int)

    s = sub.add_parser("verify", parents=[common], help="oracle cross-checks")
    s.add_argument("--suite", choices=[*SUITES, "all"])
    return parser


def _read_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        return {k: v for k, v in data.get("config", data).items() if v is not None}
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"config line without '=': {line!r}")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def _resolve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from the config file, then from built-in defaults."""
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    config = _read_config(args.config) if args.config else {}
    defaults = {**BUILTIN, **COMMANDS[args.command][1]}
    for dest, action in actions.items():
        if dest in ("help", "config") or getattr(args, dest) is not None:
            continue
        if dest in config:
            raw = config[dest]
            if isinstance(raw, list):
                raw = "..".join(str(v) for v in raw)
            value = action.type(str(raw)) if action.type else raw
            if action.choices and value not in action.choices:
                raise UsageError(f"config {dest}={raw!r} not one of {list(action.choices)}")
            setattr(args, dest, value)
        elif dest in defaults:
            setattr(args, dest, defaults[dest])
    required = {"sequences": ["kind", "n"], "cdf": ["t"], "ball": ["x", "r"], "density": ["point"],
                "profile": ["point", "r_min", "r_max"], "classify": ["side", "value"],
                "admissible": ["mode", "d", "alpha"]}
    missing = [d for d in required.get(args.command, []) if getattr(args, d) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return args


def run_config(args: argparse.Namespace, p: Params) -> dict:
    """The effective configuration, in the form ``--config`` reads back."""
    skip = {"config", "command", "help"}
    out = {"command": args.command, "N": p.N, "rho": _scalar(p.rho, p), "precision": p.precision}
    for k, v in vars(args).items():
        if k in skip or k in out:
            continue
        if isinstance(v, tuple):
            v = f"{v[0]}..{v[1]}"
        out[k] = _scalar(v, p)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = sys.stdout
    try:
        args = _resolve(parser, args)
        rho = args.rho if args.rho is not None else Fraction(1, args.N**2)
        p = Params(args.N, rho, args.precision)
        handler = COMMANDS[args.command][0]
        rows = [{k: _scalar(v, p) for k, v in r.items()} for r in handler(args, p)]
        render(rows, run_config(args, p), args.format, out)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"homcantor: error: {exc}", file=sys.stderr)
        return 2
    except HomCantorError as exc:
        print(f"homcantor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"homcantor: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify" and any(r["result"] == "FAIL" for r in rows):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
