"""Command-line surface for generation, decomposition, certification, trials.

Exit codes: 0 = success, 1 = domain infeasibility (a witness or a false
verdict was found and printed), 2 = usage error.  Every subcommand is
deterministic given identical flags including --seed; STARDECOMP_SEED is the
fallback when --seed is absent.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import importlib

from . import conditions, experiments, numerics
from . import graph as gr

# The package re-exports the decompose *function* under the same name as the
# submodule, so bind the module explicitly.
dc = importlib.import_module(".decompose", __package__)

__all__ = ["dispatch", "main"]


def _default_seed() -> int:
    return int(os.environ.get("STARDECOMP_SEED", "0"))


def _out_stream(args):
    return open(args.output, "w") if getattr(args, "output", None) else sys.stdout


def _emit(args, payload: dict, text_lines: list[str], csv_rows=None) -> None:
    """Write the subcommand result in the requested format."""
    fh = _out_stream(args)
    try:
        if args.format == "json":
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        elif args.format == "csv":
            if csv_rows is None:
                raise SystemExit("csv output is not available for this subcommand")
            fh.write("x,value\n")
            for x, v in csv_rows:
                fh.write(f"{x},{v}\n")
        else:
            fh.write("\n".join(text_lines) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _read_vertex_set(path: str) -> frozenset:
    """One 1-based vertex id per line; blank lines and '#' comments ignored."""
    out = set()
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.add(int(line) - 1)
    return frozenset(out)


def _profile_for(G: gr.SimpleGraph, k: int, a_path: str | None) -> dc.StarProfile:
    s = G.d // (2 * k)
    r = G.d - 2 * s * k
    if a_path is not None:
        A = _read_vertex_set(a_path)
    else:
        A = frozenset(range(G.N * r // (2 * k))) if r else frozenset()
    return dc.balanced_profile(G.N, G.d, k, A)


# --------------------------------------------------------------------------
# Subcommand handlers (each returns the process exit code)
# --------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    G = experiments._sample_graph(args.n, args.d, args.seed, args.sampler)
    if args.output:
        gr.write_graph(args.output, G)
    else:
        sys.stdout.write(f"{G.N} {G.d}\n")
        for u, v in G.edges:
            sys.stdout.write(f"{u + 1} {v + 1}\n")
    return 0


def _cmd_decompose(args) -> int:
    G = gr.read_graph(args.graph)
    profile = _profile_for(G, args.k, args.A)
    result = dc.decompose(G, args.k, profile)
    if isinstance(result, dc.Witness):
        _emit(
            args,
            {"feasible": False, "witness": result.to_dict()},
            [
                "infeasible",
                f"witness U = {sorted(v + 1 for v in result.U)}",
                f"e[U] = {result.lhs} > quota sum = {result.rhs}",
            ],
        )
        return 1
    lines = [
        f"{star.center + 1}: " + " ".join(str(e + 1) for e in star.edge_ids)
        for star in result.stars
    ]
    _emit(
        args,
        {
            "feasible": True,
            "stars": [
                {"center": s.center + 1, "edges": [e + 1 for e in s.edge_ids]}
                for s in result.stars
            ],
        },
        lines,
    )
    return 0


def _cmd_verify(args) -> int:
    G = gr.read_graph(args.graph)
    D = dc.read_decomposition(args.decomposition)
    if args.A is not None:
        profile = _profile_for(G, args.k, args.A)
    else:
        counts = [0] * G.N
        for star in D.stars:
            if not 0 <= star.center < G.N:
                _emit(args, {"valid": False, "reason": "star center out of range"},
                      ["invalid: star center out of range"])
                return 1
            counts[star.center] += 1
        profile = dc.StarProfile(k=args.k, j_of=tuple(counts))
    ok, why = dc.verify_decomposition(G, args.k, profile, D)
    _emit(args, {"valid": ok, "reason": why}, ["valid" if ok else f"invalid: {why}"])
    return 0 if ok else 1


def _cmd_cond_check(args) -> int:
    G = gr.read_graph(args.graph)
    profile = _profile_for(G, args.k, args.A)
    U = frozenset(int(tok) - 1 for tok in args.U.replace(",", " ").split())
    holds_u, holds_uc = dc.check_condition_U(G, profile, U)
    _emit(
        args,
        {"U": sorted(v + 1 for v in U), "holds_U": holds_u, "holds_complement": holds_uc},
        [f"holds_U={holds_u} holds_complement={holds_uc}"],
    )
    return 0 if holds_u and holds_uc else 1


def _cmd_brute_check(args) -> int:
    G = gr.read_graph(args.graph)
    profile = _profile_for(G, args.k, args.A)
    result = dc.brute_force_condition(G, profile)
    if result is True:
        _emit(args, {"holds": True}, ["condition holds for all subsets"])
        return 0
    _emit(
        args,
        {"holds": False, "witness": result.to_dict()},
        [
            f"witness U = {sorted(v + 1 for v in result.U)}",
            f"e[U] = {result.lhs} > quota sum = {result.rhs}",
        ],
    )
    return 1


def _cmd_strong(args) -> int:
    res = conditions.strong_condition(conditions.star_params(args.d, args.k))
    _emit(
        args,
        {"d": args.d, "k": args.k, "holds": res.holds, "margin": res.margin},
        [f"d={args.d} k={args.k} holds={res.holds} margin={res.margin:+.6e}"],
    )
    return 0 if res.holds else 1


def _ksc_row(d: int) -> tuple[int, int]:
    return d, conditions.k_sc(d).k_sc


def _cmd_ksc(args) -> int:
    if args.d is not None:
        ds = [args.d]
    else:
        ds = list(range(13, args.d_max + 1))
    workers = args.threads or os.cpu_count() or 1
    if workers > 1 and len(ds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_ksc_row, ds))
    else:
        rows = [_ksc_row(d) for d in ds]
    _emit(
        args,
        {"rows": [{"d": d, "k_sc": k} for d, k in rows]},
        [f"{d}\t{k}" for d, k in rows],
        csv_rows=rows,
    )
    return 0


def _cmd_gamma(args) -> int:
    val = conditions.gamma_beta(args.beta)
    _emit(args, {"beta": args.beta, "gamma": val}, [f"gamma({args.beta}) = {val:.6f}"])
    return 0


def _cmd_quarter_scan(args) -> int:
    max_value, verdict = conditions.scan_quarter_case(grid=args.grid)
    _emit(
        args,
        {"max": max_value, "threshold": -1.0 / 9.0, "verdict": verdict},
        [f"max = {max_value:.6f}  (< -1/9: {verdict})"],
    )
    return 0 if verdict else 1


def _cmd_weak_cert(args) -> int:
    params = conditions.star_params(args.d, args.k)
    cert = conditions.weak_certificate(
        params, grid_step=args.grid_step, x_minus=args.x_minus, x_plus=args.x_plus
    )
    _emit(
        args,
        cert.to_dict(),
        [
            f"d={args.d} k={args.k} window=[{cert.x_minus:.6g}, {cert.x_plus:.6g}]",
            f"max bound = {cert.max_bound:+.6e}",
            f"verdict = {cert.verdict}",
        ],
        csv_rows=list(cert.case1_curve) + list(cert.case2_curve),
    )
    return 0 if cert.verdict else 1


def _cmd_bounds_curve(args) -> int:
    params = {
        "d": args.d,
        "k": args.k,
        "grid": args.grid,
        "grid_step": args.grid_step,
        "x_minus": args.x_minus,
        "x_plus": args.x_plus,
    }
    if args.kind == "weak-bound" and (args.d is None or args.k is None):
        raise SystemExit("bounds-curve --kind weak-bound requires --d and --k")
    experiments.emit_curves(args.kind, {k: v for k, v in params.items() if v is not None},
                            args.output or "curve.csv")
    return 0


def _cmd_pmr(args) -> int:
    if args.inside is None and args.r is None:
        raise SystemExit("pmr requires --inside or --r")
    if args.inside is not None:
        cell = numerics.SubgraphCount(args.n, args.d, args.m, args.inside)
    else:
        cell = numerics.SubgraphCount.from_average_degree(args.n, args.d, args.m, args.r)
    import math

    logp = numerics.exact_P_Mr(cell)
    payload = {
        "N": args.n, "d": args.d, "M": args.m,
        "inside": cell.half_edge_pairs_inside,
        "log_P": logp, "P": math.exp(logp),
    }
    lines = [f"P = {math.exp(logp):.9g}  (log P = {logp:.6f})"]
    if args.trials:
        est, err = experiments.empirical_P_Mr(
            args.n, args.d, args.m, cell.half_edge_pairs_inside, args.trials, seed=args.seed
        )
        payload.update({"empirical": est, "stderr": err, "trials": args.trials})
        lines.append(f"empirical = {est:.9g} +- {err:.2g} over {args.trials} trials")
    _emit(args, payload, lines)
    return 0


def _cmd_trials(args) -> int:
    report = experiments.run_decomposition_trials(
        d=args.d,
        k=args.k,
        N=args.n,
        trials=args.trials,
        a_mode=args.a_mode,
        seed=args.seed,
        sampler=args.sampler,
        keep_records=args.records,
    )
    payload = report.to_dict(include_records=args.records)
    lo, hi = report.wilson95
    lines = [
        f"{report.successes}/{report.trials} decompositions succeeded "
        f"(rate {report.success_rate:.3f}, wilson95 [{lo:.3f}, {hi:.3f}])"
    ]
    for rec in report.records:
        if not rec.success:
            lines.append(f"  trial {rec.trial}: witness {rec.witness}")
    _emit(args, payload, lines)
    return 0


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stardecomp",
        description="k-star decompositions of regular graphs and their certificates",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--output", "-o", default=None)
        p.add_argument("--threads", type=int, default=None)
        return p

    p = add("gen", _cmd_gen, help="sample a simple d-regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sampler", choices=("auto", "reject", "restart"), default="auto")

    p = add("decompose", _cmd_decompose, help="decompose a graph into k-stars")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--A", default=None, help="file listing the (s+1)-star vertices")

    p = add("verify", _cmd_verify, help="verify a decomposition file")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--decomposition", required=True)
    p.add_argument("--A", default=None)

    p = add("cond-check", _cmd_cond_check, help="evaluate the subset condition for one U")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--U", required=True, help="comma/space separated 1-based vertex ids")
    p.add_argument("--A", default=None)

    p = add("brute-check", _cmd_brute_check, help="check the condition on all subsets")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--A", default=None)

    p = add("strong", _cmd_strong, help="decide the strong condition at (d, k)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("ksc", _cmd_ksc, help="threshold table k_sc(d)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--d", type=int)
    g.add_argument("--d-max", type=int)

    p = add("gamma", _cmd_gamma, help="threshold ratio at a given beta")
    p.add_argument("--beta", type=float, required=True)

    p = add("quarter-scan", _cmd_quarter_scan, help="scan the s >= 2 reduction curve")
    p.add_argument("--grid", type=int, default=10_000)

    p = add("weak-cert", _cmd_weak_cert, help="build the weak certificate for (d, k)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--grid-step", type=float, default=1e-4)
    p.add_argument("--x-minus", type=float, default=None)
    p.add_argument("--x-plus", type=float, default=None)

    p = add("bounds-curve", _cmd_bounds_curve, help="emit a certificate curve as CSV")
    p.add_argument("--kind", choices=("gamma", "quarter-case", "weak-bound"), required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--x-minus", type=float, default=None)
    p.add_argument("--x-plus", type=float, default=None)

    p = add("pmr", _cmd_pmr, help="exact (and optionally empirical) subset probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--inside", type=int, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--trials", type=int, default=0)

    p = add("trials", _cmd_trials, help="Monte Carlo decomposition trials")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--a-mode", choices=("random", "fixed"), default="random")
    p.add_argument("--sampler", choices=("auto", "reject", "restart"), default="auto")
    p.add_argument("--records", action="store_true")

    return parser


def dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(dispatch())
