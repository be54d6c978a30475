"""Command-line verification surface.

One executable, eight subcommands: mean, expand, preserver, centrality,
geodesic, dbw, axioms, verify. Every run produces either aligned text or a
versioned JSON report; identical argv and seed give byte-identical JSON
except for the elapsed_ms field. Exit codes: 0 when every reported check
passes, 1 when any check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .centrality import (
    commutator_report,
    remark1_identity_chain,
    remark2_identity_chain,
)
from .errors import MeanlabError
from .expansion import (
    DEFAULT_GRID,
    EpsFamily,
    check_power_mean_expansion,
    check_wasserstein_expansion,
    fit_series,
    pauli_pair,
)
from .geometry import (
    GEODESIC_BW,
    GEODESIC_TRACE,
    check_geodesic_metric,
    d_bw,
    geodesic,
)
from .matcore import (
    HermitianMatrix,
    PdMatrix,
    matrix_from_json,
    matrix_to_json,
    mpow,
)
from .means import (
    ARITHMETIC,
    GEOMETRIC,
    HARMONIC,
    SPECTRAL_GEOMETRIC,
    WASSERSTEIN,
    ando_variational_certificate,
    check_kubo_ando_axioms,
    conventional_power,
    kubo_ando_from_function,
    kubo_ando_power,
    mean,
    representing_function_of,
    wasserstein_alt,
)
from .preserver import (
    constant_functional,
    linear_functional,
    phi_of,
    preserver_residual,
    solve_coefficients,
    trace_power_functional,
)
from .report import CheckItem, CheckReport
from .sampling import random_pd, rng_for
from .verification import CRITERIA, run_all

SCHEMA = "meanlab-report/1"

_FIXED_KINDS = {
    "arithmetic": ARITHMETIC,
    "harmonic": HARMONIC,
    "geometric": GEOMETRIC,
    "spectral-geometric": SPECTRAL_GEOMETRIC,
    "wasserstein": WASSERSTEIN,
}


def _parse_grid(text: str) -> EpsFamily:
    try:
        start, stop, count = text.split(":")
        values = np.linspace(float(start), float(stop), int(count))
        return EpsFamily(tuple(float(v) for v in values))
    except (ValueError, MeanlabError) as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: {exc}") from exc


def _load_pd(path: str) -> PdMatrix:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return PdMatrix.certify(HermitianMatrix(matrix_from_json(obj)))


def _kind_from(name: str, p):
    if name == "kubo-ando-power":
        if p is None:
            raise MeanlabError("--p is required for kubo-ando-power")
        return kubo_ando_power(p)
    if name == "conventional-power":
        if p is None:
            raise MeanlabError("--p is required for conventional-power")
        return conventional_power(p)
    return _FIXED_KINDS[name]


def _emit(args, command: str, parameters: dict, checks, result=None) -> int:
    items = tuple(checks)
    all_pass = all(item.passed for item in items)
    if args.json:
        payload = {
            "schema": SCHEMA,
            "command": command,
            "parameters": parameters,
            "checks": [item.to_json() for item in items],
            "all_pass": all_pass,
            "elapsed_ms": int((time.monotonic() - args._t0) * 1000),
        }
        if result is not None:
            payload["result"] = result
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        lines = [f"meanlab {command}"]
        if result is not None:
            lines.append(json.dumps(result, sort_keys=True))
        lines.extend(item.line() for item in items)
        lines.append("all checks passed" if all_pass else "CHECK FAILURES PRESENT")
        text = "\n".join(lines)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if all_pass else 1


def _cmd_mean(args) -> int:
    kind = _kind_from(args.kind, args.p)
    A = _load_pd(args.a)
    B = _load_pd(args.b)
    M = mean(kind, A, B)
    checks = []
    result = {"mean": matrix_to_json(M)}
    if kind.tag == "wasserstein":
        alt = wasserstein_alt(A, B)
        checks.append(
            CheckItem.bound(
                "two Wasserstein formulas agree",
                float(np.linalg.norm(M.mat - alt.mat)),
                1e-11 * args.tol_scale,
            )
        )
    if args.via_function:
        if not kind.is_kubo_ando:
            raise MeanlabError(f"--via-function requires a Kubo-Ando kind, not {kind.label}")
        M2 = kubo_ando_from_function(
            lambda t: representing_function_of(kind, t), A, B, name=kind.label
        )
        checks.append(
            CheckItem.bound(
                "functional-calculus route agrees",
                float(np.linalg.norm(M.mat - M2.mat)),
                1e-10 * args.tol_scale,
            )
        )
    if args.certificate:
        if kind.tag != "geometric":
            raise MeanlabError("--certificate applies to the geometric mean only")
        ok = ando_variational_certificate(A, B, M.matrix)
        checks.append(
            CheckItem.bound("variational certificate accepts the mean", 0.0 if ok else 1.0, 0.0)
        )
    if args.rep_at is not None:
        value = representing_function_of(kind, args.rep_at)
        result["representing_function"] = {"t": args.rep_at, "value": value}
    params = {"kind": args.kind, "p": args.p, "a": args.a, "b": args.b}
    return _emit(args, "mean", params, checks, result)


def _rescale(items, scale: float):
    """Re-judge compare and bound items under a scaled tolerance.

    Floor items are separations, not tolerances, and stay fixed.
    """
    if scale == 1.0:
        return list(items)
    out = []
    for item in items:
        if item.mode == "bound":
            out.append(CheckItem.bound(item.name, item.observed, item.tolerance * scale))
        elif item.mode == "compare":
            out.append(
                CheckItem.compare(
                    item.name, item.expected, item.observed, item.tolerance * scale
                )
            )
        else:
            out.append(item)
    return out


def _cmd_expand(args) -> int:
    grid = args.grid if args.grid is not None else DEFAULT_GRID
    if args.mean == "kubo-ando":
        if args.p is None:
            raise MeanlabError("--p is required for the power family")
        report = check_power_mean_expansion(args.p, grid)
        kind = kubo_ando_power(args.p)
        fit = fit_series(lambda e: mean(kind, *pauli_pair(e)), grid)
    else:
        report = check_wasserstein_expansion(grid)
        fit = fit_series(lambda e: mean(WASSERSTEIN, *pauli_pair(e)), grid)
    result = {
        "title": report.title,
        "c0": matrix_to_json(fit.c0),
        "c1": matrix_to_json(fit.c1),
        "c2": matrix_to_json(fit.c2),
        "residual_bound": fit.residual_bound,
    }
    params = {"mean": args.mean, "p": args.p, "grid": list(grid.eps_grid)}
    return _emit(args, "expand", params, _rescale(report.items, args.tol_scale), result)


def _cmd_preserver(args) -> int:
    if args.functional is None:
        if args.mean == "kubo-ando":
            if args.p is None:
                raise MeanlabError("--p is required for the power family")
            kind = kubo_ando_power(args.p)
        else:
            kind = WASSERSTEIN
        rep = solve_coefficients(kind)
        report = rep.contract_report(args.tol_scale)
        params = {"mean": args.mean, "p": args.p}
        return _emit(args, "preserver", params, report.items, rep.to_json())

    if args.pairs < 1:
        raise MeanlabError("--pairs must be at least 1")
    p = args.p if args.p is not None else 0.5
    if args.functional == "constant":
        f = constant_functional(1.7)
    elif args.functional == "linear":
        dim = 2
        f = linear_functional(HermitianMatrix(np.eye(dim) / dim))
    else:
        f = trace_power_functional(p)
    kind = WASSERSTEIN if args.mean == "wasserstein" else kubo_ando_power(p)
    worst = 0.0
    A = B = None
    for i in range(args.pairs):
        rng = rng_for(args.seed, i)
        A = random_pd(rng, 2)
        B = random_pd(rng, 2)
        worst = max(worst, preserver_residual(f, kind, A, B))
    phi = phi_of(f, p)
    roundtrip = abs(f(A) - phi(mpow(A, p)))
    checks = (
        CheckItem.bound(
            "transform round-trip recovers the functional", roundtrip, 1e-12 * args.tol_scale
        ),
    )
    result = {
        "functional": f.label,
        "mean": kind.label,
        "pairs": args.pairs,
        "worst_residual": worst,
    }
    params = {"functional": args.functional, "mean": args.mean, "p": p, "pairs": args.pairs}
    return _emit(args, "preserver", params, checks, result)


def _cmd_centrality(args) -> int:
    if args.kind == "kubo-ando-power":
        if args.p is None:
            raise MeanlabError("--p is required for kubo-ando-power")
        kind = kubo_ando_power(args.p)
    elif args.kind == "harmonic":
        kind = HARMONIC
    else:
        kind = WASSERSTEIN
    A = _load_pd(args.a)
    params = {
        "kind": args.kind,
        "p": args.p,
        "a": args.a,
        "b": args.b,
        "chain": args.chain,
        "samples": args.samples,
    }

    if args.chain == "probe":
        if args.b is not None:
            B = _load_pd(args.b)
            rep = commutator_report(kind, A, B)
            return _emit(args, "centrality", params, (), rep.to_json())
        pair_reports = []
        central = True
        worst = 0.0
        for i in range(args.samples):
            B = random_pd(rng_for(args.seed, i), A.dim)
            r = commutator_report(kind, A, B, pair_id=f"sample-{i}")
            pair_reports.append(r.to_json())
            worst = max(worst, r.commutator_norm)
            central = central and r.verdict == "commutes"
        result = {"central": central, "worst_gap": worst, "pairs": pair_reports}
        return _emit(args, "centrality", params, (), result)

    if args.b is None:
        raise MeanlabError(f"--b is required for --chain {args.chain}")
    B = _load_pd(args.b)
    if args.chain == "remark1":
        chain = remark1_identity_chain(A, B)
        checks = (
            CheckItem.bound(
                "derivative step matches the extracted coefficient",
                chain.derivative_error,
                1e-5 * args.tol_scale,
            ),
        )
    else:
        if args.p is None:
            raise MeanlabError("--p is required for --chain remark2")
        chain = remark2_identity_chain(A, B, args.p)
        checks = ()
    return _emit(args, "centrality", params, checks, chain.to_json())


def _cmd_geodesic(args) -> int:
    kind = GEODESIC_BW if args.kind == "bw" else GEODESIC_TRACE
    A = _load_pd(args.a)
    B = _load_pd(args.b)
    G = geodesic(kind, A, B, args.t)
    checks = []
    result = {"point": matrix_to_json(G), "t": args.t}
    if args.check_metric:
        partition = (0.0, 0.25, 0.5, 0.75, 1.0)
        dev = check_geodesic_metric(A, B, partition)
        total = d_bw(A, B)
        result["metric_deviation"] = dev
        # Relative contract with an absolute floor for near-coincident pairs.
        checks.append(
            CheckItem.bound(
                "distance accrues proportionally along the curve",
                dev,
                args.tol_scale * max(1e-8 * total, 1e-13),
            )
        )
    params = {"kind": args.kind, "a": args.a, "b": args.b, "t": args.t}
    return _emit(args, "geodesic", params, checks, result)


def _cmd_dbw(args) -> int:
    A = _load_pd(args.a)
    B = _load_pd(args.b)
    params = {"a": args.a, "b": args.b}
    return _emit(args, "dbw", params, (), {"distance": d_bw(A, B)})


def _cmd_axioms(args) -> int:
    kind = _kind_from(args.kind, args.p)
    rep = check_kubo_ando_axioms(kind, samples=args.samples, rng_seed=args.seed, dim=args.dim)
    checks = tuple(
        CheckItem.bound(f"axiom failures: {c.axiom}", float(c.failures), 0.0) for c in rep.checks
    )
    params = {"kind": args.kind, "p": args.p, "samples": args.samples, "dim": args.dim}
    return _emit(args, "axioms", params, checks, rep.to_json())


def _cmd_verify(args) -> int:
    if args.criterion is not None:
        reports = [CRITERIA[args.criterion](seed=args.seed, tol_scale=args.tol_scale)]
    elif args.all:
        reports = run_all(seed=args.seed, tol_scale=args.tol_scale)
    else:
        raise MeanlabError("pass --all or --criterion N")
    all_pass = all(rep.all_pass for rep in reports)
    if args.json:
        payload = {
            "schema": SCHEMA,
            "command": "verify",
            "parameters": {"all": args.all, "criterion": args.criterion},
            "reports": [rep.to_json() for rep in reports],
            "all_pass": all_pass,
            "elapsed_ms": int((time.monotonic() - args._t0) * 1000),
        }
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        lines = []
        for rep in reports:
            lines.extend(rep.lines())
        lines.append("all criteria passed" if all_pass else "CRITERIA FAILURES PRESENT")
        text = "\n".join(lines)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all sampled checks")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument(
        "--tol-scale",
        dest="tol_scale",
        type=float,
        default=1.0,
        help="multiplies all default tolerances",
    )
    common.add_argument("--out", default=None, help="also write the report to this file")

    parser = argparse.ArgumentParser(
        prog="meanlab",
        description="Verification CLI for operator means on positive definite matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mean = sub.add_parser("mean", parents=[common], help="evaluate a mean of two PD matrices")
    p_mean.add_argument("--kind", required=True, choices=sorted(_FIXED_KINDS) + ["kubo-ando-power", "conventional-power"])
    p_mean.add_argument("--p", type=float, default=None)
    p_mean.add_argument("--a", required=True)
    p_mean.add_argument("--b", required=True)
    p_mean.add_argument("--via-function", dest="via_function", action="store_true",
                        help="cross-check through the representing function")
    p_mean.add_argument("--certificate", action="store_true",
                        help="check the variational certificate (geometric mean)")
    p_mean.add_argument("--rep-at", dest="rep_at", type=float, default=None,
                        help="also evaluate the representing function at t")
    p_mean.set_defaults(func=_cmd_mean)

    p_expand = sub.add_parser("expand", parents=[common], help="perturbative expansion checks")
    p_expand.add_argument("--mean", required=True, choices=["kubo-ando", "wasserstein"])
    p_expand.add_argument("--p", type=float, default=None)
    p_expand.add_argument("--grid", type=_parse_grid, default=None, metavar="START:STOP:COUNT")
    p_expand.set_defaults(func=_cmd_expand)

    p_pres = sub.add_parser("preserver", parents=[common], help="mean-preserving functional checks")
    p_pres.add_argument("--mean", choices=["kubo-ando", "wasserstein"], default="kubo-ando")
    p_pres.add_argument("--p", type=float, default=None)
    p_pres.add_argument("--functional", choices=["constant", "linear", "trace-power"], default=None)
    p_pres.add_argument("--pairs", type=int, default=100)
    p_pres.set_defaults(func=_cmd_preserver)

    p_cent = sub.add_parser("centrality", parents=[common], help="commutation probes and chains")
    p_cent.add_argument("--kind", choices=["wasserstein", "kubo-ando-power", "harmonic"], default="wasserstein")
    p_cent.add_argument("--p", type=float, default=None)
    p_cent.add_argument("--a", required=True)
    p_cent.add_argument("--b", default=None)
    p_cent.add_argument("--chain", choices=["probe", "remark1", "remark2"], default="probe")
    p_cent.add_argument("--samples", type=int, default=50)
    p_cent.set_defaults(func=_cmd_centrality)

    p_geo = sub.add_parser("geodesic", parents=[common], help="evaluate a geodesic point")
    p_geo.add_argument("--kind", choices=["trace", "bw"], required=True)
    p_geo.add_argument("--a", required=True)
    p_geo.add_argument("--b", required=True)
    p_geo.add_argument("--t", type=float, default=0.5)
    p_geo.add_argument("--check-metric", dest="check_metric", action="store_true",
                       help="also verify proportional distance accrual")
    p_geo.set_defaults(func=_cmd_geodesic)

    p_dbw = sub.add_parser("dbw", parents=[common], help="Bures-Wasserstein distance")
    p_dbw.add_argument("--a", required=True)
    p_dbw.add_argument("--b", required=True)
    p_dbw.set_defaults(func=_cmd_dbw)

    p_ax = sub.add_parser("axioms", parents=[common], help="Kubo-Ando axiom battery")
    p_ax.add_argument("--kind", required=True, choices=sorted(_FIXED_KINDS) + ["kubo-ando-power", "conventional-power"])
    p_ax.add_argument("--p", type=float, default=None)
    p_ax.add_argument("--samples", type=int, default=50)
    p_ax.add_argument("--dim", type=int, default=2)
    p_ax.set_defaults(func=_cmd_axioms)

    p_ver = sub.add_parser("verify", parents=[common], help="acceptance criteria batteries")
    p_ver.add_argument("--all", action="store_true")
    p_ver.add_argument("--criterion", type=int, choices=sorted(CRITERIA), default=None)
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args._t0 = time.monotonic()
    try:
        return args.func(args)
    except (MeanlabError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
