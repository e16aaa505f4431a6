"""Command-line front end.

Every command emits one structured JSON report on stdout (or to the file
named by ``--out``): keys in fixed order, UTF-8, no timestamps, tool
version included, so identical inputs give byte-identical reports.
Curve-producing commands also accept ``--curve-out`` for a plot-ready
CSV (header row, ``.`` decimal, LF endings).

Exit codes: 0 for a completed analysis whatever the verdict, 2 for
invalid input, 3 when an internal cross-check disagrees beyond
tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .applications import (
    AS_PUBLISHED,
    PURE_TARGET,
    CoherentTask,
    StorageRecord,
    benchmark_table,
    coherent_task_overlaps,
    squeezed_storage_analysis,
)
from .criterion import (
    FidelityPair,
    OverlapPair,
    Verdict,
    boundary_curve,
    classical_fidelity_bound,
    qd_criterion,
    qd_criterion_numeric,
    total_nonorthogonality,
)
from .fock_oracle import coherent_fock, squeezed_thermal, uhlmann_fock
from .gaussian import (
    CovMat2,
    GaussianState,
    SqueezingRecord,
    rotate_cov,
    uhlmann_fidelity_gaussian,
)
from .mp_oracle import optimize_scheme

__all__ = ["main", "build_parser"]

AGREEMENT_TOL = 1e-6
SCHEME_SUITE_TOL = 1e-6
FOCK_SUITE_TOL = 1e-4
COHERENT_SUITE_TOL = 1e-6


def _verdict_dict(v: Verdict) -> dict:
    return {
        "is_quantum_domain": bool(v.is_quantum_domain),
        "lhs": float(v.lhs),
        "rhs": None if math.isnan(v.rhs) else float(v.rhs),
        "method": v.method,
        "marginal": bool(v.marginal),
        "swapped": bool(v.swapped),
        "degenerate": v.degenerate,
    }


def _report_head(command: str) -> dict:
    return {"tool": "qdverify", "version": __version__, "command": command}


def _nonorth_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--B", type=float, default=None,
        help="nonorthogonality parameter (1 - gamma_prime**2) * gamma**2",
    )
    p.add_argument("--gamma", type=float, default=None, help="input-pair overlap")
    p.add_argument(
        "--gamma-prime", type=float, default=None, help="target-pair overlap"
    )


def _resolve_nonorth(args: argparse.Namespace) -> tuple[float, float | None, float | None]:
    have_overlaps = args.gamma is not None or args.gamma_prime is not None
    if args.B is not None:
        if have_overlaps:
            raise ValueError("give --B or the overlap pair, not both")
        return float(args.B), None, None
    if args.gamma is None or args.gamma_prime is None:
        raise ValueError("need --B, or both --gamma and --gamma-prime")
    pair = OverlapPair(args.gamma, args.gamma_prime)
    return total_nonorthogonality(pair), args.gamma, args.gamma_prime


def _cmd_criterion(args: argparse.Namespace) -> tuple[dict, None, int]:
    nonorth, gamma, gamma_prime = _resolve_nonorth(args)
    pair = FidelityPair(args.a, args.b)
    verdict = qd_criterion(pair, nonorth)
    numeric = qd_criterion_numeric(pair, nonorth)
    tol = AGREEMENT_TOL if args.tolerance is None else float(args.tolerance)

    if verdict.degenerate is not None:
        agrees = not numeric.is_quantum_domain
    else:
        agrees = abs(verdict.rhs - numeric.rhs) <= tol and (
            verdict.is_quantum_domain == numeric.is_quantum_domain
            or verdict.marginal
            or numeric.marginal
        )

    report = _report_head("criterion")
    report["inputs"] = {
        "a": float(args.a),
        "b": float(args.b),
        "B": None if args.B is None else float(args.B),
        "gamma": gamma,
        "gamma_prime": gamma_prime,
        "p_plus": args.p_plus,
        "tolerance": tol,
    }
    report["nonorthogonality"] = float(nonorth)
    report["verdict"] = _verdict_dict(verdict)
    report["numeric_check"] = {
        "rhs": None if math.isnan(numeric.rhs) else float(numeric.rhs),
        "is_quantum_domain": bool(numeric.is_quantum_domain),
        "tolerance": tol,
        "agrees": bool(agrees),
    }
    if args.p_plus is not None:
        report["fixed_prior_bound"] = {
            "p_plus": float(args.p_plus),
            "value": classical_fidelity_bound(nonorth, args.p_plus),
        }
    return report, None, 0 if agrees else 3


def _cmd_boundary(args: argparse.Namespace) -> tuple[dict, tuple, int]:
    nonorth, gamma, gamma_prime = _resolve_nonorth(args)
    curve = boundary_curve(nonorth, args.points)
    report = _report_head("boundary")
    report["inputs"] = {
        "B": None if args.B is None else float(args.B),
        "gamma": gamma,
        "gamma_prime": gamma_prime,
        "points": int(args.points),
    }
    report["nonorthogonality"] = float(nonorth)
    report["symmetric_point"] = 0.5 * (1.0 + math.sqrt(1.0 - nonorth))
    report["curve"] = {
        "a": [float(x) for x in curve[:, 0]],
        "b": [float(x) for x in curve[:, 1]],
    }
    rows = [(float(x), float(y)) for x, y in curve]
    return report, (("a", "b"), rows), 0


def _cmd_coherent(args: argparse.Namespace) -> tuple[dict, None, int]:
    task = CoherentTask(args.alpha, args.eta)
    overlaps = coherent_task_overlaps(task)
    nonorth = total_nonorthogonality(overlaps)
    verdict = qd_criterion(FidelityPair(args.a, args.b), nonorth)
    report = _report_head("coherent")
    report["inputs"] = {
        "alpha": float(args.alpha),
        "eta": float(args.eta),
        "a": float(args.a),
        "b": float(args.b),
    }
    report["gamma"] = overlaps.gamma
    report["gamma_prime"] = overlaps.gamma_prime
    report["nonorthogonality"] = float(nonorth)
    report["verdict"] = _verdict_dict(verdict)
    return report, None, 0


def _load_record(args: argparse.Namespace) -> tuple[StorageRecord, str]:
    if args.record is not None:
        data = json.loads(Path(args.record).read_text(encoding="utf-8"))
        try:
            rec = StorageRecord(
                str(data["label"]),
                SqueezingRecord(float(data["X_db"]), float(data["Y_db"])),
                SqueezingRecord(float(data["Xp_db"]), float(data["Yp_db"])),
            )
        except KeyError as exc:
            raise ValueError(f"record file is missing key {exc.args[0]!r}") from exc
        mode = args.mode or data.get("mode") or AS_PUBLISHED
        if mode not in (AS_PUBLISHED, PURE_TARGET):
            raise ValueError(f"unknown mode {mode!r} in record file")
        return rec, mode
    direct = (args.sq_in, args.antisq_in, args.sq_out, args.antisq_out)
    if any(v is None for v in direct):
        raise ValueError(
            "need --record, or all four of --squeezing-in-db "
            "--antisqueezing-in-db --squeezing-out-db --antisqueezing-out-db"
        )
    rec = StorageRecord(
        args.label,
        SqueezingRecord(args.sq_in, args.antisq_in),
        SqueezingRecord(args.sq_out, args.antisq_out),
    )
    return rec, args.mode or AS_PUBLISHED


_CURVE_HEADER = ("theta", "gamma_sq", "gamma_prime_sq", "nonorthogonality", "benchmark")


def _cmd_squeezed(args: argparse.Namespace) -> tuple[dict, tuple, int]:
    rec, mode = _load_record(args)
    rep = squeezed_storage_analysis(rec, args.theta_points, mode)
    report = _report_head("squeezed")
    report["inputs"] = {
        "label": rec.label,
        "X_db": rec.input_state.squeezing_db,
        "Y_db": rec.input_state.antisqueezing_db,
        "Xp_db": rec.output_state.squeezing_db,
        "Yp_db": rec.output_state.antisqueezing_db,
        "mode": mode,
        "theta_points": int(args.theta_points),
    }
    report["a"] = float(rep.a)
    report["b"] = float(rep.b)
    report["lhs"] = float(rep.lhs)
    report["theta_min"] = float(rep.theta_min)
    report["rhs_min"] = float(rep.rhs_min)
    report["verdict"] = _verdict_dict(rep.verdict)
    report["notes"] = list(rep.notes)
    report["curves"] = {
        "theta": rep.thetas.tolist(),
        "gamma_sq": rep.gamma_sq.tolist(),
        "gamma_prime_sq": rep.gamma_prime_sq.tolist(),
        "nonorthogonality": rep.B.tolist(),
        "benchmark": rep.rhs.tolist(),
    }
    rows = list(
        zip(
            rep.thetas.tolist(),
            rep.gamma_sq.tolist(),
            rep.gamma_prime_sq.tolist(),
            rep.B.tolist(),
            rep.rhs.tolist(),
        )
    )
    return report, (_CURVE_HEADER, rows), 0


def _cmd_table1(args: argparse.Namespace) -> tuple[dict, None, int]:
    reports = benchmark_table(args.theta_points, args.mode)
    report = _report_head("table1")
    report["inputs"] = {
        "theta_points": int(args.theta_points),
        "mode": args.mode,
    }
    report["rows"] = [
        {
            "label": rep.label,
            "a": float(rep.a),
            "b": float(rep.b),
            "lhs": float(rep.lhs),
            "theta_min": float(rep.theta_min),
            "rhs_min": float(rep.rhs_min),
            "is_quantum_domain": bool(rep.verdict.is_quantum_domain),
        }
        for rep in reports
    ]
    return report, None, 0


def _scheme_suite(args: argparse.Namespace, tol: float) -> dict:
    values = np.linspace(0.1, 0.9, args.grid_size)
    worst = 0.0
    cases = 0
    for gamma in values:
        for gamma_prime in values:
            nonorth = total_nonorthogonality(OverlapPair(gamma, gamma_prime))
            for p_plus in values:
                closed = classical_fidelity_bound(nonorth, float(p_plus))
                _, found = optimize_scheme(
                    float(gamma),
                    float(gamma_prime),
                    float(p_plus),
                    resolution=args.resolution,
                    n_random=args.random_schemes,
                    seed=args.seed,
                )
                worst = max(worst, abs(closed - found))
                cases += 1
    return {
        "name": "closed_form_vs_scheme_search",
        "cases": cases,
        "max_abs_diff": worst,
        "tolerance": tol,
        "passed": worst <= tol,
    }


def _fock_suite(args: argparse.Namespace, tol: float) -> dict:
    rng = np.random.default_rng(args.seed)
    r_max = 6.0 * math.log(10.0) / 20.0
    worst = 0.0
    for _ in range(args.pairs):
        states = []
        gaussians = []
        for _ in range(2):
            r = float(rng.uniform(-r_max, r_max))
            nbar = float(rng.uniform(0.0, 1.0))
            theta = float(rng.uniform(0.0, math.pi))
            states.append(squeezed_thermal(r, nbar, theta, args.dim))
            base = CovMat2.diagonal(
                (2.0 * nbar + 1.0) * math.exp(2.0 * r),
                (2.0 * nbar + 1.0) * math.exp(-2.0 * r),
            )
            gaussians.append(GaussianState(rotate_cov(base, theta)))
        closed = uhlmann_fidelity_gaussian(gaussians[0], gaussians[1])
        direct = uhlmann_fock(states[0], states[1])
        worst = max(worst, abs(closed - direct))
    return {
        "name": "gaussian_vs_fock",
        "cases": args.pairs,
        "max_abs_diff": worst,
        "tolerance": tol,
        "passed": worst <= tol,
    }


def _coherent_suite(tol: float) -> dict:
    exact = math.exp(-2.0)
    vac = CovMat2.diagonal(1.0, 1.0)
    closed = uhlmann_fidelity_gaussian(
        GaussianState(vac, 1.0, 0.0), GaussianState(vac, -1.0, 0.0)
    )
    direct = uhlmann_fock(coherent_fock(1.0, 40), coherent_fock(-1.0, 40))
    worst = max(abs(closed - exact), abs(direct - exact))
    return {
        "name": "coherent_overlap",
        "cases": 2,
        "max_abs_diff": worst,
        "tolerance": tol,
        "passed": worst <= tol,
    }


def _cmd_oracle_check(args: argparse.Namespace) -> tuple[dict, None, int]:
    override = args.tolerance
    suites = [
        _scheme_suite(args, override if override is not None else SCHEME_SUITE_TOL),
        _fock_suite(args, override if override is not None else FOCK_SUITE_TOL),
        _coherent_suite(override if override is not None else COHERENT_SUITE_TOL),
    ]
    passed = all(s["passed"] for s in suites)
    report = _report_head("oracle-check")
    report["inputs"] = {
        "grid_size": int(args.grid_size),
        "resolution": int(args.resolution),
        "random_schemes": int(args.random_schemes),
        "pairs": int(args.pairs),
        "dim": int(args.dim),
        "seed": int(args.seed),
        "tolerance": override,
    }
    report["suites"] = suites
    report["passed"] = passed
    return report, None, 0 if passed else 3


def _out_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdverify",
        description="decide from fidelity data whether a channel beats "
        "every measure-and-prepare strategy",
    )
    parser.add_argument(
        "--version", action="version", version=f"qdverify {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    crit = sub.add_parser("criterion", help="run the two-state test on explicit numbers")
    crit.add_argument("--a", type=float, required=True, help="first measured fidelity")
    crit.add_argument("--b", type=float, required=True, help="second measured fidelity")
    _nonorth_flags(crit)
    crit.add_argument(
        "--p-plus", type=float, default=None,
        help="also report the fixed-prior bound at this prior",
    )
    crit.add_argument(
        "--tolerance", type=float, default=None,
        help=f"closed-form vs numeric agreement tolerance (default {AGREEMENT_TOL})",
    )
    _out_flag(crit)

    bnd = sub.add_parser("boundary", help="sample the pass/fail boundary curve")
    _nonorth_flags(bnd)
    bnd.add_argument("--points", type=int, default=200, help="number of samples")
    bnd.add_argument("--curve-out", default=None, help="also write the curve as CSV")
    _out_flag(bnd)

    coh = sub.add_parser("coherent", help="binary coherent-state pipeline")
    coh.add_argument("--alpha", type=float, required=True, help="probe amplitude")
    coh.add_argument("--eta", type=float, required=True, help="channel transmission")
    coh.add_argument("--a", type=float, required=True, help="first measured fidelity")
    coh.add_argument("--b", type=float, required=True, help="second measured fidelity")
    _out_flag(coh)

    sq = sub.add_parser("squeezed", help="squeezed-storage benchmark scan")
    sq.add_argument("--record", default=None, help="JSON record file")
    sq.add_argument("--label", default="session", help="label when giving dB flags")
    sq.add_argument("--squeezing-in-db", dest="sq_in", type=float, default=None)
    sq.add_argument("--antisqueezing-in-db", dest="antisq_in", type=float, default=None)
    sq.add_argument("--squeezing-out-db", dest="sq_out", type=float, default=None)
    sq.add_argument("--antisqueezing-out-db", dest="antisq_out", type=float, default=None)
    sq.add_argument(
        "--mode", choices=[AS_PUBLISHED, PURE_TARGET], default=None,
        help="overrides the record file's mode",
    )
    sq.add_argument("--theta-points", type=int, default=256)
    sq.add_argument("--curve-out", default=None, help="also write the scan as CSV")
    _out_flag(sq)

    tab = sub.add_parser("table1", help="analyse the four embedded benchmark records")
    tab.add_argument("--theta-points", type=int, default=256)
    tab.add_argument(
        "--mode", choices=[AS_PUBLISHED, PURE_TARGET], default=AS_PUBLISHED
    )
    _out_flag(tab)

    orc = sub.add_parser(
        "oracle-check",
        help="cross-validate closed forms against the numerical oracles",
    )
    orc.add_argument("--grid-size", type=int, default=3, help="per-axis scheme grid")
    orc.add_argument("--resolution", type=int, default=2048)
    orc.add_argument("--random-schemes", type=int, default=16)
    orc.add_argument("--pairs", type=int, default=10, help="random state pairs")
    orc.add_argument("--dim", type=int, default=120)
    orc.add_argument("--seed", type=int, default=7)
    orc.add_argument(
        "--tolerance", type=float, default=None,
        help="override every suite tolerance",
    )
    _out_flag(orc)

    return parser


_HANDLERS = {
    "criterion": _cmd_criterion,
    "boundary": _cmd_boundary,
    "coherent": _cmd_coherent,
    "squeezed": _cmd_squeezed,
    "table1": _cmd_table1,
    "oracle-check": _cmd_oracle_check,
}


def _write_csv(path: str, header: tuple, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, allow_nan=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report, curve, code = _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.out)
    if curve is not None and getattr(args, "curve_out", None):
        _write_csv(args.curve_out, *curve)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
