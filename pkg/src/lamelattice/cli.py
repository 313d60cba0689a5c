"""Command-line front end.

Every subcommand reads an optional JSON config; ``--seed``, ``--jobs``,
``--threshold`` and repeated ``--set key=value`` flags override its fields.
Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .chebyshev import (derivative_relation_check, explicit_first_kind, explicit_formula_check,
                        prove_master_identity, summation_values)
from .dynamics import EvolveConfig, IntegrationError, LatticeState, evolve, extract_frequency
from .lame import chebyshev_crosscheck
from .models import ALParams, SalernoParams, derive_frequencies, params_from_dict, stationary_pair
from .profiles import Family, ProfileSpec, build_profile, build_profile_mp, commensurate_beta
from .verification import GridSpec, run_grid

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

DEFAULT_EVOLVE = {
    "model": {"kind": "al", "mu1": -1.0, "mu2": -1.0},
    "profile": {"family": "dn", "N": 3, "m": 0.5, "beta": 0.7, "c2": 0.0, "L": 64},
    "dt": 1e-3,
    "t_end": 10.0,
    "boundary": "periodic",
    "stride": 100,
    "site": None,
    "match_tol": 1e-6,
}


class InputError(ValueError):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=True) + "\n"


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _apply_override(cfg: dict, item: str):
    if "=" not in item:
        raise InputError(f"--set expects KEY=VALUE, got {item!r}")
    key, value = item.split("=", 1)
    node = cfg
    parts = key.split(".")
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise InputError(f"cannot set {key!r}: {p!r} is not an object")
    node[parts[-1]] = _parse_value(value)


def load_config(args, defaults: dict | None = None) -> dict:
    cfg = json.loads(json.dumps(defaults or {}))
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InputError("config must be a JSON object")
        cfg.update(loaded)
    for item in args.set or ():
        _apply_override(cfg, item)
    for name in ("seed", "jobs", "threshold"):
        value = getattr(args, name, None)
        if value is not None:
            cfg[name] = value
    return cfg


def _emit(args, text: str, summary: str | None = None):
    """Write the payload to ``--out`` (or stdout) and the summary line to stdout."""
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        if summary:
            print(summary)
    else:
        sys.stdout.write(text)
        if summary:
            print(summary, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen_profile(args) -> int:
    cfg = load_config(args, {"family": "dn", "N": 3, "beta": 1.0, "L": 64})
    if "m" not in cfg and Family(cfg["family"]).fixed_modulus is None:
        cfg["m"] = 0.5
    spec = ProfileSpec.from_dict(cfg)
    L = int(cfg.get("L", 64))
    origin = cfg.get("origin")
    precision = cfg.get("precision", "float64")
    if precision not in ("float64", "multiprecision"):
        raise InputError(f"precision must be float64 or multiprecision, got {precision!r}")
    build = build_profile_mp if precision == "multiprecision" else build_profile
    profile = build(spec, L, origin=None if origin is None else int(origin))
    threshold = float(cfg.get("threshold", 1e-12))
    # double-precision unbounded fields are judged relative to their magnitude
    worst = profile.max_residual if precision == "multiprecision" else profile.max_scaled_residual
    text = profile.to_json() + "\n" if args.format == "json" else profile.to_csv()
    judged = "absolute" if precision == "multiprecision" else "scaled"
    summary = (f"family={spec.family.value} N={spec.N} sites={L} precision={precision} "
               f"max_residual={_fmt(profile.max_residual)} {judged}={_fmt(worst)}")
    _emit(args, text, summary)
    return EXIT_OK if worst < threshold else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = load_config(args)
    grid = GridSpec.from_dict(cfg)
    seed = int(cfg.get("seed", 0))
    jobs = int(cfg.get("jobs", 1))
    if jobs < 1:
        raise InputError("--jobs must be >= 1")
    report = run_grid(grid, seed=seed, jobs=jobs)
    if args.format == "csv":
        keys = ["model", "family", "N", "beta", "c2", "m", "max_residual", "rms_residual",
                "max_rel_residual", "metric", "omega1", "omega2", "omega2_paper", "passed"]
        rows = [[r[k] if not isinstance(r[k], float) else _fmt(r[k]) for k in keys]
                + [json.dumps(r["params"], sort_keys=True), ";".join(r["flags"])]
                for r in report["rows"]]
        text = _csv(rows, keys + ["params", "flags"])
    else:
        text = _dumps(report)
    summary = f"cells={report['cells']} failures={len(report['failures'])} threshold={_fmt(grid.threshold)}"
    _emit(args, text, summary)
    for i in report["failures"][:20]:
        r = report["rows"][i]
        print(f"FAIL cell {i}: {r['model']} {r['family']} N={r['N']} "
              f"max_residual={_fmt(r['max_residual'])} max_rel={_fmt(r['max_rel_residual'])}",
              file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _best_site(u0, v0) -> int:
    return int(np.argmax(np.minimum(np.abs(u0), np.abs(v0))))


def cmd_evolve(args) -> int:
    cfg = load_config(args, DEFAULT_EVOLVE)
    params = params_from_dict(cfg["model"])
    if not isinstance(params, (SalernoParams, ALParams)):
        raise InputError("evolve supports the salerno and al models only")
    prof = dict(cfg["profile"])
    fam = Family(prof["family"])
    N = int(prof["N"])
    L = int(prof.get("L", 64))
    m = prof.get("m")
    m = fam.fixed_modulus if m is None else float(m)
    beta = prof.get("beta", 1.0)
    if beta == "commensurate":
        beta = commensurate_beta(fam, N, m, L, int(prof.get("windings", 1)))
    pair = stationary_pair(params, fam, N, float(beta), float(prof.get("c2", 0.0)), m, L)
    boundary = str(cfg.get("boundary", "periodic"))
    freq = derive_frequencies(params, pair, "open")
    ecfg = EvolveConfig(dt=float(cfg["dt"]), t_end=float(cfg["t_end"]), boundary=boundary,
                        stride=int(cfg.get("stride", 1)))
    traj = evolve(params, LatticeState.from_pair(pair), ecfg)
    site = cfg.get("site")
    site = _best_site(pair.f, pair.g) if site is None else int(site)
    est = extract_frequency(traj, site)
    drift = traj.modulus_drift()
    threshold = float(cfg.get("threshold", 1e-8))
    tol = float(cfg.get("match_tol", 1e-6))
    identified = sorted(k for k, v in freq.candidates.items() if abs(v - est.omega2) <= tol)
    summary = {
        "schema": 1,
        "command": "evolve",
        "params": cfg["model"],
        "profile": {"family": fam.value, "N": N, "beta": float(beta),
                    "c2": float(prof.get("c2", 0.0)), "m": m, "L": L},
        "dt": ecfg.dt,
        "t_end": ecfg.t_end,
        "boundary": ecfg.boundary.value,
        "site": site,
        "modulus_drift": drift,
        "threshold": threshold,
        "omega1_est": est.omega1,
        "omega2_est": est.omega2,
        "phase_fit_residual": [est.fit_residual1, est.fit_residual2],
        "omega1_zeroing": freq.omega1,
        "omega2_zeroing": freq.omega2,
        "omega1_closed": freq.omega1_closed,
        "omega2_candidates": freq.candidates,
        "omega2_verdict": identified,
        "flags": list(freq.flags),
        "passed": bool(drift < threshold),
    }
    if args.format == "csv":
        _emit(args, traj.to_csv())
        print(json.dumps(summary, sort_keys=True), file=sys.stdout if args.out else sys.stderr)
    else:
        line = (f"drift={_fmt(drift)} omega1_est={_fmt(est.omega1)} omega2_est={_fmt(est.omega2)} "
                f"omega2_verdict={','.join(identified) or 'none'}")
        _emit(args, _dumps(summary), line)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def _exact_cos(n: int, period: int) -> Fraction:
    """``cos(2 pi n / period)`` for period 6 or 4, as an exact rational."""
    if period == 6:
        return [Fraction(1), Fraction(1, 2), Fraction(-1, 2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2)][n % 6]
    return [Fraction(1), Fraction(0), Fraction(-1), Fraction(0)][n % 4]


def identity_rows(n_min: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        f1, g1 = summation_values(n)
        fN = explicit_first_kind(n)
        f_half, f_zero = fN(Fraction(1, 2)), fN(0)
        c3, c2 = math.cos(n * math.pi / 3), math.cos(n * math.pi / 2)
        ok = (f1 == 1 and g1 == n
              and abs(float(f_half) - c3) < 1e-12 and abs(float(f_zero) - c2) < 1e-12
              and f_half == _exact_cos(n, 6) and f_zero == _exact_cos(n, 4))
        rows.append({"N": n, "f_N(1)": int(f1), "g_N(1)": int(g1), "f_N(1/2)": float(f_half),
                     "f_N(0)": float(f_zero), "cos(N*pi/3)": c3, "cos(N*pi/2)": c2, "ok": bool(ok)})
    return rows


def _range(cfg, lo_default, hi_default) -> tuple[int, int]:
    lo, hi = int(cfg.get("N_min", lo_default)), int(cfg.get("N_max", hi_default))
    if lo < 1:
        raise InputError("N_min must be >= 1")
    return lo, hi


def cmd_identities(args) -> int:
    cfg = load_config(args)
    lo, hi = _range(cfg, 1, 64)
    rows = identity_rows(lo, hi)
    passed = all(r["ok"] for r in rows)
    if args.format == "json":
        text = _dumps({"schema": 1, "command": "identities", "rows": rows, "passed": passed})
    else:
        header = list(rows[0]) if rows else ["N", "f_N(1)", "g_N(1)", "f_N(1/2)", "f_N(0)",
                                              "cos(N*pi/3)", "cos(N*pi/2)", "ok"]
        text = _csv([[_fmt(v) if isinstance(v, float) else v for v in r.values()] for r in rows], header)
    _emit(args, text, f"identities N={lo}..{hi} failures={sum(not r['ok'] for r in rows)}")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_prove(args) -> int:
    cfg = load_config(args)
    lo, hi = _range(cfg, 1, 32)
    thm_hi = int(cfg.get("theorem_N_max", 64))
    proofs = [prove_master_identity(n) for n in range(lo, hi + 1)]
    theorems = [{"N": n, "explicit_formula": explicit_formula_check(n),
                 "derivative_relation": derivative_relation_check(n),
                 "lame_chebyshev": chebyshev_crosscheck(n)}
                for n in range(lo, thm_hi + 1)]
    passed = all(p.proved for p in proofs) and all(
        t["explicit_formula"] and t["derivative_relation"] and t["lame_chebyshev"] for t in theorems)
    if args.format == "csv":
        text = _csv([[p.N, p.verdict, len(p.residual_coeffs)] for p in proofs],
                    ["N", "verdict", "nonzero_residual_terms"])
    else:
        text = _dumps({"schema": 1, "command": "prove",
                       "proofs": [p.to_dict() for p in proofs],
                       "theorems": theorems, "passed": passed})
    n_bad = sum(not p.proved for p in proofs)
    _emit(args, text, f"prove N={lo}..{hi} falsified={n_bad} theorems_N<={thm_hi} passed={passed}")
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "gen-profile": cmd_gen_profile,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "identities": cmd_identities,
    "prove": cmd_prove,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lamelattice",
                                     description="Exact Lamé-Chebyshev lattice solutions and their checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {"gen-profile": "csv", "verify": "json", "evolve": "json",
                "identities": "csv", "prove": "json"}
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON parameter file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=defaults[name])
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--threshold", type=float)
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field (dotted keys, JSON values)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, KeyError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
