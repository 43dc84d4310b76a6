"""Command-line interface.

Subcommands: simulate, analytic-pmf, sample-limit, density, angular,
estimate, compare, verify.  Tabular output is CSV with '#'-prefixed
metadata lines; structured reports are JSON.  Every report embeds the
resolved configuration (parameters, derived constants, seed, version).
Exit codes: 0 success, 1 validation or usage error, 2 numerical
failure.  Randomness comes only from the --seed flag (default a fixed
constant, never the clock).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import DEFAULT_SEED, __version__
from .census import (
    JointCountTable,
    compare_pmf,
    default_hill_k,
    degree_counts,
    empirical_pmf,
    hill_estimate,
    loglog_slope,
)
from .errors import HeavytailError, QuadratureFailure, SupportExceeded
from .limit_dist import LimitDistribution
from .params import ModelParams, derive, load_params, validate
from .quadrature import QuadratureSpec
from .simulate import simulate
from .tail_measure import TailMeasure, angular_histogram, standardize
from .tauberian import marginal_check, measure_check, truncation_check, uhat_check


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HEAVYTAIL_PA_THREADS")
    return max(1, int(env)) if env else 1


def _resolve_params(args) -> ModelParams:
    if args.params:
        p = load_params(args.params)
    else:
        p = ModelParams(args.alpha, args.beta, args.gamma, args.delta_in, args.delta_out)
    return validate(p)


def _config_block(args, params: ModelParams, seed=None) -> dict:
    block = {"version": __version__, "params": params.as_dict()}
    try:
        block["derived"] = derive(params).as_dict()
    except HeavytailError:
        block["derived"] = None
    if seed is not None:
        block["seed"] = seed
    block["argv"] = [a for a in sys.argv[1:]]
    return block


def _meta_lines(config: dict) -> dict:
    flat = {"version": config["version"]}
    flat.update(config["params"])
    if config.get("derived"):
        flat.update(config["derived"])
    if "seed" in config:
        flat["seed"] = config["seed"]
    return flat


def _add_param_flags(sub):
    sub.add_argument("--params", help="key=value parameter file")
    sub.add_argument("--alpha", type=float, default=0.3)
    sub.add_argument("--beta", type=float, default=0.5)
    sub.add_argument("--gamma", type=float, default=0.2)
    sub.add_argument("--delta-in", dest="delta_in", type=float, default=1.0)
    sub.add_argument("--delta-out", dest="delta_out", type=float, default=1.0)


def _add_common(sub):
    _add_param_flags(sub)
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--tolerance", type=float, default=1e-12, help="quadrature absolute tolerance")
    sub.add_argument("--threads", type=int, default=None)


def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(tol_abs=args.tolerance)


def _write_json(path, payload) -> None:
    text = json.dumps(payload, indent=2, default=float)
    if path in (None, "-"):
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _cmd_simulate(args) -> int:
    params = _resolve_params(args)
    graph = simulate(args.edges, params, args.seed)
    config = _config_block(args, params, seed=args.seed)
    if args.out:
        graph.to_binary(args.out)
    if args.counts:
        degree_counts(graph).to_csv(args.counts, metadata=_meta_lines(config))
    print(
        f"simulated n={graph.edge_count} edges, N={graph.node_count} nodes "
        f"(N/n = {graph.node_count / graph.edge_count:.4f})"
    )
    return 0


def _cmd_analytic_pmf(args) -> int:
    params = _resolve_params(args)
    dist = LimitDistribution(params, _quad(args))
    table = dist.pmf_table(args.imax, args.jmax)
    config = _config_block(args, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        for key, val in _meta_lines(config).items():
            fh.write(f"# {key} = {val}\n")
        fh.write(f"# captured_mass = {table.sum()!r}\n")
        fh.write("i,j,p\n")
        for i in range(table.shape[0]):
            for j in range(table.shape[1]):
                fh.write(f"{i},{j},{float(table[i, j])!r}\n")
    print(f"wrote {table.size} masses, captured mass {table.sum():.6f}")
    return 0


def _cmd_sample_limit(args) -> int:
    params = _resolve_params(args)
    dist = LimitDistribution(params, _quad(args))
    rng = np.random.default_rng(args.seed)
    i_arr, o_arr = dist.sample(args.n, rng)
    config = _config_block(args, params, seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        for key, val in _meta_lines(config).items():
            fh.write(f"# {key} = {val}\n")
        fh.write("I,O\n")
        for i, o in zip(i_arr, o_arr):
            fh.write(f"{i},{o}\n")
    print(f"wrote {args.n} draws to {args.out}")
    return 0


def _parse_grid(spec: str):
    """Accept 'lo:hi:count' (log-spaced when lo > 0) or comma lists."""
    if ":" in spec:
        lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
        pts = np.geomspace(lo, hi, count) if lo > 0 else np.linspace(lo, hi, count)
        return [float(v) for v in pts]
    return [float(v) for v in spec.split(",")]


def _load_numeric_csv(path, columns):
    """Read a data CSV, skipping '#' metadata and the header row."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.strip().split(",")
            if not line.strip() or line.startswith("#") or len(parts) != columns:
                continue
            try:
                rows.append([float(v) for v in parts])
            except ValueError:
                continue
    if not rows:
        raise HeavytailError(f"{path}: no numeric rows with {columns} columns")
    return np.asarray(rows)


def _cmd_density(args) -> int:
    params = _resolve_params(args)
    tm = TailMeasure(params, _quad(args))
    xs = _parse_grid(args.grid_x)
    ys = _parse_grid(args.grid_y)
    component = args.component if args.component == "combined" else int(args.component)
    config = _config_block(args, params)
    jobs = [(x, y) for x in xs for y in ys]

    def one(pt):
        return tm.density(component, pt[0], pt[1])

    with ThreadPoolExecutor(max_workers=_threads(args)) as pool:
        vals = list(pool.map(one, jobs))
    with open(args.out, "w", encoding="utf-8") as fh:
        for key, val in _meta_lines(config).items():
            fh.write(f"# {key} = {val}\n")
        fh.write(f"# component = {component}\n")
        fh.write("x,y,density\n")
        for (x, y), v in zip(jobs, vals):
            fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")
    print(f"wrote {len(jobs)} density values to {args.out}")
    return 0


def _cmd_angular(args) -> int:
    params = _resolve_params(args)
    d = derive(params)
    data = _load_numeric_csv(args.samples, columns=2)
    std = standardize((data[:, 0], data[:, 1]), d)
    radius = std.u + std.v
    threshold = float(np.quantile(radius, args.threshold_quantile))
    hist = angular_histogram(std, threshold, args.bins)
    config = _config_block(args, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        for key, val in _meta_lines(config).items():
            fh.write(f"# {key} = {val}\n")
        fh.write(f"# threshold = {threshold!r}\n")
        fh.write(f"# exceedances = {hist.exceedances}\n")
        fh.write("angle_lo,angle_hi,mass\n")
        for lo, hi, m in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.masses):
            fh.write(f"{float(lo)!r},{float(hi)!r},{float(m)!r}\n")
    print(f"wrote {args.bins} angular bins ({hist.exceedances} exceedances) to {args.out}")
    return 0


def _cmd_estimate(args) -> int:
    counts = JointCountTable.from_csv(args.counts)
    pmf = empirical_pmf(counts)
    if args.method == "hill":
        marg_counts = counts.marginal(args.margin)
        degrees = np.repeat(np.arange(marg_counts.size), marg_counts)
        degrees = degrees[degrees > 0].astype(np.float64)
        k = args.k if args.k else default_hill_k(degrees.size)
        fit = hill_estimate(degrees, k)
    else:
        fit = loglog_slope(pmf.marginal(args.margin), args.i_min)
    report = {
        "method": args.method,
        "margin": args.margin,
        "index_estimate": fit.index_estimate,
        "k_used": fit.k_used,
        "stderr": fit.stderr,
        "version": __version__,
    }
    _write_json(args.out, report)
    return 0


def _cmd_compare(args) -> int:
    counts = JointCountTable.from_csv(args.counts)
    emp = empirical_pmf(counts)
    params = _resolve_params(args)
    dist = LimitDistribution(params, _quad(args))
    from .census import JointPMF

    ana = JointPMF(dist.pmf_table(args.imax, args.jmax))
    cmp_report = compare_pmf(emp, ana, args.imax, args.jmax)
    report = {
        "config": _config_block(args, params),
        "i_max": args.imax,
        "j_max": args.jmax,
        "tv_distance": cmp_report.tv_distance,
        "max_abs_diff": cmp_report.max_abs_diff,
        "cells": [
            {"i": i, "j": j, "diff": float(cmp_report.diff[i, j])}
            for i in range(args.imax + 1)
            for j in range(args.jmax + 1)
        ],
    }
    _write_json(args.out, report)
    print(f"TV distance on box: {cmp_report.tv_distance:.6f}")
    return 0


def _cmd_verify(args) -> int:
    params = _resolve_params(args)
    quad = _quad(args)
    kwargs = {"k": args.k, "quad": quad}
    if args.check == "uhat":
        report = uhat_check(params, h_grid=_parse_grid(args.h_grid), rel_tol=args.rel_tol, **kwargs)
    elif args.check == "measure":
        report = measure_check(params, t_grid=_parse_grid(args.t_grid), rel_tol=args.rel_tol, **kwargs)
    elif args.check == "truncation":
        report = truncation_check(
            params, t_grid=_parse_grid(args.t_grid), y_grid=_parse_grid(args.y_grid), **kwargs
        )
    else:
        report = marginal_check(
            params,
            component=args.component,
            t_grid=_parse_grid(args.t_grid),
            rel_tol=args.rel_tol,
            **kwargs,
        )
    report["config"] = _config_block(args, params)
    _write_json(args.out, report)
    print(f"{args.check}: {'pass' if report['passed'] else 'FAIL'}")
    return 0 if report["passed"] else 2


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heavytail-pa", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("simulate", help="grow a graph and write edge list / degree counts")
    _add_common(s)
    s.add_argument("--edges", type=int, required=True)
    s.add_argument("--out", help="binary edge-list output path")
    s.add_argument("--counts", help="degree-count CSV output path")
    s.set_defaults(fn=_cmd_simulate)

    s = sp.add_parser("analytic-pmf", help="tabulate the limiting joint degree law")
    _add_common(s)
    s.add_argument("--imax", type=int, default=200)
    s.add_argument("--jmax", type=int, default=200)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_analytic_pmf)

    s = sp.add_parser("sample-limit", help="draw iid pairs from the limiting law")
    _add_common(s)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_sample_limit)

    s = sp.add_parser("density", help="tabulate tail-measure densities on a grid")
    _add_common(s)
    s.add_argument("--component", choices=["1", "2", "combined"], default="combined")
    s.add_argument("--grid-x", default="0.5:5:9", help="lo:hi:count (log-spaced) or comma list")
    s.add_argument("--grid-y", default="0.5:5:9")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_density)

    s = sp.add_parser("angular", help="angular histogram of standardized samples")
    _add_common(s)
    s.add_argument("--samples", required=True, help="CSV with columns I,O")
    s.add_argument("--threshold-quantile", type=float, default=0.999)
    s.add_argument("--bins", type=int, default=10)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_angular)

    s = sp.add_parser("estimate", help="tail-index estimates from degree counts")
    s.add_argument("--counts", required=True)
    s.add_argument("--margin", choices=["in", "out"], default="in")
    s.add_argument("--method", choices=["hill", "loglog"], default="hill")
    s.add_argument("--k", type=int, default=None, help="hill order statistics (default sqrt(n))")
    s.add_argument("--i-min", dest="i_min", type=int, default=10)
    s.add_argument("--out", default="-")
    s.set_defaults(fn=_cmd_estimate)

    s = sp.add_parser("compare", help="empirical counts vs the analytic law on a box")
    _add_common(s)
    s.add_argument("--counts", required=True)
    s.add_argument("--imax", type=int, default=10)
    s.add_argument("--jmax", type=int, default=10)
    s.add_argument("--out", default="-")
    s.set_defaults(fn=_cmd_compare)

    s = sp.add_parser("verify", help="transform/measure scaling-limit checks")
    _add_common(s)
    s.add_argument("--check", choices=["uhat", "measure", "truncation", "marginal"], required=True)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--component", type=int, default=1)
    s.add_argument("--h-grid", default="1e2,1e4,1e6")
    s.add_argument("--t-grid", default=None)
    s.add_argument("--y-grid", default="0,1,2,4,8")
    s.add_argument("--rel-tol", type=float, default=None)
    s.add_argument("--out", default="-")
    s.set_defaults(fn=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "verify":
        if args.t_grid is None:
            args.t_grid = {"measure": "1e2,1e3,1e4", "truncation": "1e3,1e4,1e5"}.get(
                args.check, "1e2,1e3,1e4,1e5"
            )
        if args.rel_tol is None:
            args.rel_tol = {"uhat": 0.05, "measure": 0.10, "marginal": 0.10}.get(args.check, 0.05)
    try:
        return args.fn(args)
    except (QuadratureFailure, SupportExceeded) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except HeavytailError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
