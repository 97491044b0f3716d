"""Command-line front end: ``gen``, ``analyze``, ``scan``, ``validate``.

Exit codes: 0 normal, 1 oracle violation (``validate``), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import oracle, states
from .criteria import BoundId, critical_visibility, m_k, theorem1_threshold, thm4_id
from .errors import GMEError
from .numerics import make_rng
from .report import analyze, format_report
from .statefile import read_state, to_dict

FAMILIES = ("ghz", "w", "product", "biseparable", "random")
BOUND_CHOICES = ["all", "thm4", "purity", "lu"] + [b.value for b in BoundId]


class UsageError(GMEError):
    pass


def _g(x: float) -> str:
    return f"{x:.9g}"


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _k_arg(text: str):
    if text == "all":
        return None
    try:
        k = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--k expects 'all' or an integer, got {text!r}") from exc
    if k < 1:
        raise argparse.ArgumentTypeError("--k must be >= 1")
    return k


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- gen ---------------------------------------------------------------------


def build_state(args):
    family = args.family
    if family == "ghz":
        state = states.ghz(args.n, args.d)
    elif family == "w":
        if args.d != 2:
            raise UsageError("the W family is defined for qubits only (--d 2)")
        state = states.w_state(args.n)
    elif family == "product":
        if args.levels:
            if len(args.levels) != args.n or any(not 0 <= l < args.d for l in args.levels):
                raise UsageError(f"--levels needs {args.n} values in 0..{args.d - 1}")
            state = states.basis_product(args.levels, args.d)
        else:
            state = states.random_product(states.PartyStructure(args.n, args.d), make_rng(args.seed))
    elif family == "biseparable":
        if not args.cut:
            raise UsageError("biseparable needs --cut, e.g. --cut 1 or --cut 1,2")
        state = states.random_biseparable_pure(
            states.PartyStructure(args.n, args.d), args.cut, make_rng(args.seed))
    else:
        s = states.PartyStructure(args.n, args.d)
        rng = make_rng(args.seed)
        if args.rank > 1:
            pures = [states.random_pure(s, rng) for _ in range(args.rank)]
            state = states.mixture(pures, rng.dirichlet(np.ones(args.rank)))
        else:
            state = states.random_pure(s, rng)
    if args.noise is not None:
        state = states.mix_with_white_noise(state, args.noise)
    return state


def cmd_gen(args) -> int:
    state = build_state(args)
    _emit(json.dumps(to_dict(state)) + ("" if args.out else "\n"), args.out)
    return 0


# -- analyze -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    state = read_state(args.file)
    ks = None if args.k is None else [args.k]
    rep = analyze(state, ks=ks, noise=args.noise, source=str(args.file))
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        print(format_report(rep))
    return 0


# -- scan --------------------------------------------------------------------


def scan_rows(state, k: int, pmin: float, pmax: float, steps: int) -> list[dict]:
    rho = states.as_density(state)
    thr = theorem1_threshold(rho.d, k)
    rows = []
    for p in np.linspace(pmin, pmax, steps):
        p = float(p)
        value = m_k(states.mix_with_white_noise(rho, p), k)
        rows.append({"p": p, "M_k": value, "threshold": thr, "detected": int(value - thr > 1e-12)})
    return rows


def cmd_scan(args) -> int:
    state = read_state(args.file)
    if state.n != 4:
        raise UsageError(f"scan needs a four-party state, got n={state.n}")
    if args.steps < 1 or not 0 <= args.pmin <= args.pmax <= 1:
        raise UsageError("need 0 <= pmin <= pmax <= 1 and steps >= 1")
    rows = scan_rows(state, args.k, args.pmin, args.pmax, args.steps)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "M_k", "threshold", "detected"])
    for r in rows:
        writer.writerow([_g(r["p"]), _g(r["M_k"]), _g(r["threshold"]), r["detected"]])
    _emit(buf.getvalue(), args.out)
    cv = critical_visibility(state, args.k, tol=1e-6)
    msg = (f"critical visibility (k={args.k}): {_g(cv.p)}" if cv.detectable
           else f"critical visibility (k={args.k}): NotDetectable")
    print(msg, file=sys.stderr if not args.out else sys.stdout)
    return 0


# -- validate ----------------------------------------------------------------


def run_validation(bound_id: str, n: int, d: int, samples, seed: int, k=None, mixtures: int = 0):
    if bound_id == "all":
        ids = oracle.validation_ids(n)
    elif bound_id == "thm4":
        ids = [thm4_id(n).value]
    else:
        ids = [bound_id]
    reports = []
    for bid in ids:
        if bid == "purity":
            reports.append(oracle.check_purity_identity(n, d, samples, seed))
        elif bid == "lu":
            reports.append(oracle.check_lu_invariance(states.ghz(n, d), seed=seed))
        elif bid == BoundId.THM1.value:
            reports.append(oracle.check_detector_soundness(d, k, samples, seed, mixtures))
        else:
            reports.append(oracle.check_bound(bid, n, d, k, samples, seed))
    return reports


def cmd_validate(args) -> int:
    reports = run_validation(args.bound, args.n, args.d, args.samples, args.seed, args.k,
                             args.mixtures)
    if args.json:
        print(json.dumps([r.as_dict() for r in reports], indent=2))
    else:
        for r in reports:
            status = "ok" if r.passed else "VIOLATED"
            print(f"{r.bound_id:>10}  n={r.n} d={r.d} samples={r.samples} seed={r.seed}  "
                  f"max={_g(r.max_observed)}  worst_margin={_g(r.worst_margin)}  "
                  f"violations={r.violations}  {status}")
            for row in r.rows:
                if row.k is not None:
                    print(f"{'':>12}k={row.k}: max={_g(row.max_observed)} bound={_g(row.bound)} "
                          f"violations={row.violations}")
            for key, val in r.extra.items():
                print(f"{'':>12}{key}: {val}")
    return 0 if all(r.passed for r in reports) else 1


# -- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmetensor",
        description="Correlation-tensor certification of genuine multipartite entanglement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a state file")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--cut", type=_int_list, help="parties on one side, e.g. 1 or 1,2")
    gen.add_argument("--levels", type=_int_list, help="product: computational basis levels")
    gen.add_argument("--rank", type=int, default=1, help="random: mix this many Haar pure states")
    gen.add_argument("--noise", type=float, default=None, help="white-noise visibility p")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="norms, M_k and verdicts for a state file")
    an.add_argument("file")
    an.add_argument("--k", type=_k_arg, default=None, help="'all' (default) or one k")
    an.add_argument("--noise", type=float, default=None)
    an.add_argument("--json", action="store_true")
    an.set_defaults(func=cmd_analyze)

    sc = sub.add_parser("scan", help="white-noise visibility sweep to CSV")
    sc.add_argument("file")
    sc.add_argument("--k", type=int, required=True)
    sc.add_argument("--pmin", type=float, default=0.0)
    sc.add_argument("--pmax", type=float, default=1.0)
    sc.add_argument("--steps", type=int, default=101)
    sc.add_argument("--out", default=None)
    sc.set_defaults(func=cmd_scan)

    va = sub.add_parser("validate", help="Monte Carlo check of the closed-form bounds")
    va.add_argument("--bound", choices=BOUND_CHOICES, default="all")
    va.add_argument("--n", type=int, default=4)
    va.add_argument("--d", type=int, default=2)
    va.add_argument("--k", type=int, default=None)
    va.add_argument("--samples", type=int, default=None)
    va.add_argument("--mixtures", type=int, default=0, help="thm1: extra convex mixtures")
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--json", action="store_true")
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GMEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
