"""Command-line interface: compute, verify, bench, sweep.

Complex numbers cross the wire as two-element arrays [re, im], JSON goes to
stdout (or --output), CSV has a header row and '.' decimals.  Exit code 0
means every requested computation/check succeeded; 1 means a verification
failure; 2 means bad input or a singular evaluation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings

import numpy as np

from . import partition, verify
from .params import (
    IllConditionedWarning,
    InvariantViolation,
    ModelParams,
    ParseError,
    SosError,
    rel_diff,
    validate_params,
)


def _complex_from_wire(value, where):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"{where}: expected [re, im], got {value!r}")
    return complex(value[0], value[1])


def _complex_to_wire(z):
    z = complex(z)
    return [z.real, z.imag]


def load_model_params(path):
    """Read a ModelParams JSON file and enforce every instance invariant."""
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("eta", "zeta", "theta", "lambdas", "xis"):
        if key not in doc:
            raise ParseError(f"{path}: missing field {key!r}")
    for key in ("lambdas", "xis"):
        if not isinstance(doc[key], list):
            raise ParseError(f"{path}: field {key!r} must be a list")
    p = ModelParams(
        eta=_complex_from_wire(doc["eta"], f"{path}: eta"),
        zeta=_complex_from_wire(doc["zeta"], f"{path}: zeta"),
        theta=_complex_from_wire(doc["theta"], f"{path}: theta"),
        lambdas=tuple(
            _complex_from_wire(v, f"{path}: lambdas[{i}]")
            for i, v in enumerate(doc["lambdas"])
        ),
        xis=tuple(
            _complex_from_wire(v, f"{path}: xis[{i}]")
            for i, v in enumerate(doc["xis"])
        ),
    )
    validate_params(p)
    return p


def dump_model_params(p):
    """Inverse of load_model_params (round-trips exactly)."""
    return json.dumps(
        {
            "eta": _complex_to_wire(p.eta),
            "zeta": _complex_to_wire(p.zeta),
            "theta": _complex_to_wire(p.theta),
            "lambdas": [_complex_to_wire(v) for v in p.lambdas],
            "xis": [_complex_to_wire(v) for v in p.xis],
        },
        indent=2,
    )


def _result_doc(r):
    doc = {
        "Z": _complex_to_wire(r.value),
        "method": r.method,
        "elapsed_ms": r.elapsed * 1000.0,
        "n": r.n,
    }
    if r.cond_hint is not None:
        doc["cond_hint"] = r.cond_hint
    if r.log_value is not None:
        doc["log_Z"] = _complex_to_wire(r.log_value)
    return doc


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def cmd_compute(p, method, cap=partition.BRUTE_CAP_DEFAULT, output=None):
    """Evaluate Z by the requested route(s) and emit JSON."""
    results = []
    if method in ("det", "both"):
        results.append(partition.z_determinant(p))
    if method in ("brute", "both"):
        results.append(partition.z_bruteforce(p, cap=cap))
    if method == "both":
        doc = {
            "results": [_result_doc(r) for r in results],
            "rel_diff": rel_diff(results[0].value, results[1].value),
        }
    else:
        doc = _result_doc(results[0])
    _emit(json.dumps(doc, indent=2), output)
    return 0


def cmd_verify(suite, seed, samples, max_n, output=None):
    """Run a verification suite; exit 0 only if every check passed."""
    cfg = verify.SuiteConfig(seed=seed, samples_per_case=samples)
    if max_n is not None:
        kept = tuple(n for n in cfg.n_values if n <= max_n)
        if not kept:
            raise ParseError(f"--max-n {max_n} leaves no chain sizes to test")
        cfg = verify.SuiteConfig(
            seed=seed, samples_per_case=samples, n_values=kept
        )
    report = verify.run_suite(suite, cfg)
    _emit(report.to_json(), output)
    return 0 if report.summary["failed"] == 0 else 1


def cmd_bench(max_n, seed, cap=partition.BRUTE_CAP_DEFAULT, output=None):
    """Time both routes per chain size; CSV to stdout.

    Ill-conditioning warnings are suppressed here: at large N the determinant
    value is expected to lose digits, and the benchmark measures time only.
    """
    cfg = verify.SuiteConfig(seed=seed)
    rows = ["n,t_det_ms,t_brute_ms,rel_diff"]
    for n in range(1, max_n + 1):
        rng = np.random.default_rng(np.random.SeedSequence((seed, n)))
        p = verify.sample_params(cfg, n, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IllConditionedWarning)
            det = partition.z_determinant(p)
        if n <= min(cap, partition.BRUTE_CAP_HARD_MAX):
            brute = partition.z_bruteforce(p, cap=cap)
            rows.append(
                f"{n},{det.elapsed * 1000.0:.3f},{brute.elapsed * 1000.0:.3f},"
                f"{rel_diff(det.value, brute.value):.3e}"
            )
        else:
            rows.append(f"{n},{det.elapsed * 1000.0:.3f},-,-")
    _emit("\n".join(rows), output)
    return 0


def cmd_sweep(p, vary, start, stop, points, output=None):
    """Z by determinant along a straight-line grid in one lambda.

    `vary` is 1-based.  Grid points failing the genericity guards are kept in
    the CSV but marked skipped, with no Z columns.
    """
    if not 1 <= vary <= p.n:
        raise ParseError(f"--vary must be in 1..{p.n}, got {vary}")
    i = vary - 1
    if points < 1:
        raise ParseError("--points must be >= 1")
    if points == 1:
        grid = np.array([start])
    else:
        grid = start + (stop - start) * np.arange(points) / (points - 1)
    rows = ["lambda_re,lambda_im,z_re,z_im,status"]
    for v in grid:
        q = p.replace_lambda(i, v)
        try:
            validate_params(q)
            z = partition.z_determinant(q).value
        except SosError:
            rows.append(f"{v.real:.17g},{v.imag:.17g},,,skipped")
            continue
        rows.append(f"{v.real:.17g},{v.imag:.17g},{z.real:.17g},{z.imag:.17g},ok")
    _emit("\n".join(rows), output)
    return 0


def _parse_complex_flag(text, flag):
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"{flag} expects RE,IM, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise ParseError(f"{flag} expects two floats, got {text!r}") from None


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sosre",
        description="Reflecting-end SOS partition function: compute, verify, bench, sweep.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="evaluate Z for a parameter file")
    c.add_argument("--config", required=True, help="ModelParams JSON file")
    c.add_argument("--method", choices=("det", "brute", "both"), default="det")
    c.add_argument("--cap", type=int, default=partition.BRUTE_CAP_DEFAULT,
                   help=f"brute-force chain-size cap (hard max {partition.BRUTE_CAP_HARD_MAX})")
    c.add_argument("--output", default=None)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=verify.SUITE_NAMES, required=True)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--samples", type=int, default=25)
    v.add_argument("--max-n", type=int, default=None)
    v.add_argument("--output", default=None)

    b = sub.add_parser("bench", help="time determinant vs brute force per N")
    b.add_argument("--max-n", type=int, required=True)
    b.add_argument("--seed", type=int, default=42)
    b.add_argument("--cap", type=int, default=partition.BRUTE_CAP_DEFAULT)
    b.add_argument("--output", default=None)

    s = sub.add_parser("sweep", help="Z along a grid in one lambda")
    s.add_argument("--config", required=True)
    s.add_argument("--vary", type=int, required=True, help="1-based lambda index")
    s.add_argument("--from", dest="start", required=True, metavar="RE,IM")
    s.add_argument("--to", dest="stop", required=True, metavar="RE,IM")
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--output", default=None)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            p = load_model_params(args.config)
            return cmd_compute(p, args.method, cap=args.cap, output=args.output)
        if args.command == "verify":
            if args.seed < 0:
                raise ParseError("--seed must be nonnegative")
            if args.samples < 1:
                raise ParseError("--samples must be >= 1")
            return cmd_verify(
                args.suite, args.seed, args.samples, args.max_n, output=args.output
            )
        if args.command == "bench":
            if args.max_n < 1:
                raise ParseError("--max-n must be >= 1")
            if args.seed < 0:
                raise ParseError("--seed must be nonnegative")
            return cmd_bench(args.max_n, args.seed, cap=args.cap, output=args.output)
        if args.command == "sweep":
            p = load_model_params(args.config)
            start = _parse_complex_flag(args.start, "--from")
            stop = _parse_complex_flag(args.stop, "--to")
            return cmd_sweep(p, args.vary, start, stop, args.points, output=args.output)
        raise ParseError(f"unknown command {args.command!r}")
    except SosError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
