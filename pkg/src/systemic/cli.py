"""Command-line interface.

Every subcommand prints one JSON report to stdout (human diagnostics go to
stderr) so invocations compose in pipelines.  Exit codes: 0 success, 1 a
property violation or bound breach was found, 2 input/format errors, 3
numerical failures.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import design, measures, properties, sim
from .errors import NumericalError, SolverError, SystemicError
from .graphs import (WeightedGraph, generate, is_connected, laplacian,
                     parse_graph, serialize_graph, spanning_tree_count)
from .measures import ENTROPY_FORM_WARNING, MeasureDescriptor
from .spectral import graph_spectrum, zero_tolerance

SCHEMA_VERSION = "1.0.0"
BOUND_BREACH_TOL = 1e-9

_clock = time.perf_counter  # patchable for deterministic report tests


def _parse_exponent(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _load_graph(path: str) -> WeightedGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemicError(f"cannot read graph file {path}: {exc}")
    return parse_graph(text)


def _descriptor(args: argparse.Namespace) -> MeasureDescriptor:
    return MeasureDescriptor(id=args.measure, p=getattr(args, "p", None),
                             k=getattr(args, "k", None),
                             f_id=getattr(args, "f", None))


def _sanitize(value):
    """Make a report tree JSON-safe with deterministic float text (repr)."""
    if isinstance(value, dict):
        return {key: _sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_sanitize(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def emit_report(command: str, inputs: dict, results: dict,
                warning_list: list[str], timing: float) -> None:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": _sanitize(inputs),
        "results": _sanitize(results),
        "warnings": list(warning_list),
        "timing": timing,
    }
    print(json.dumps(report, indent=2, allow_nan=False))


def _measure_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--measure", required=True, choices=measures.MEASURE_IDS)
    parser.add_argument("--p", type=_parse_exponent, default=None,
                        help="exponent for zeta_measure / hp_norm ('inf' allowed)")
    parser.add_argument("--k", type=float, default=None,
                        help="positive scale for zeta_measure")
    parser.add_argument("--f", default=None,
                        help="spectral function id for schur_sum, e.g. inverse, inverse_pow:2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="systemic",
        description="Performance/robustness measures of consensus networks "
                    "over weighted graphs: evaluation, verification, design.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate one catalog measure on a graph")
    p.add_argument("--graph", required=True)
    _measure_args(p)

    p = sub.add_parser("zeta", help="spectral zeta function of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("hpnorm", help="H_p norm, closed form and optional quadrature")
    p.add_argument("--graph", required=True)
    p.add_argument("--p", type=_parse_exponent, required=True)
    p.add_argument("--numeric", action="store_true",
                   help="also evaluate the frequency integral numerically")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="relative tolerance of the quadrature")

    p = sub.add_parser("trees", help="spanning-tree count and the entropy cross-check")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("props", help="run one axiom check as a falsification search")
    _measure_args(p)
    p.add_argument("--property", required=True,
                   choices=["homogeneity", "monotonicity", "convexity",
                            "orthogonal", "schur", "subadditivity"])
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=properties.DEFAULT_TOL)

    p = sub.add_parser("optimize-weights",
                       help="minimize a measure over simplex edge weights")
    p.add_argument("--topology", required=True,
                   help="edge-list file; its weights are ignored")
    _measure_args(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=2000)

    p = sub.add_parser("rewire", help="rank all connected (n, m) graphs by a measure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    _measure_args(p)

    p = sub.add_parser("augment", help="greedy edge augmentation with spectral bound")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--candidates", required=True,
                   help="edge-list file of candidate edges with budget weights")
    p.add_argument("--f", required=True,
                   help="decreasing convex spectral function id, e.g. inverse")

    p = sub.add_parser("simulate-h2", help="Monte-Carlo estimate of the squared H_2 measure")
    p.add_argument("--graph", required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--horizon", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--burn-in", type=float, default=None,
                   help="discarded prefix; defaults to min(5/lambda_2, horizon/4)")

    p = sub.add_parser("validate", help="parse a graph file and audit its invariants")
    p.add_argument("--graph", required=True)
    return parser


# ---------------------------------------------------------------------------
# subcommand bodies: return (results dict, exit code)

def _run_measure(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    descriptor = _descriptor(args)
    value = measures.evaluate(graph, descriptor)
    return {"measure": descriptor.label(), "value": value}, 0


def _run_zeta(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    return {"p": args.p, "value": measures.zeta(graph, args.p)}, 0


def _run_hpnorm(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    closed = measures.hp_norm(graph, args.p)
    results = {"p": args.p if math.isfinite(args.p) else "inf", "closed_form": closed}
    if args.numeric:
        numeric = measures.hp_norm_numeric(
            graph, args.p, measures.QuadratureSettings(rel_tol=args.tol))
        results["numeric"] = numeric
        results["difference"] = closed - numeric
        results["relative_difference"] = abs(closed - numeric) / abs(closed)
    return results, 0


def _run_trees(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    tau = spanning_tree_count(graph)
    spectral_entropy = measures.evaluate(graph, MeasureDescriptor("entropy"))
    matrix_tree_entropy = measures.entropy_via_trees(graph)
    results = {
        "tau": tau,
        "entropy_spectral": spectral_entropy,
        "entropy_matrix_tree": matrix_tree_entropy,
        "entropy_literal_form": math.log(graph.n / tau),
    }
    return results, 0


_PROPERTY_NAMES = {
    "homogeneity": "homogeneity",
    "monotonicity": "monotonicity",
    "convexity": "convexity",
    "orthogonal": "orthogonal_invariance",
    "schur": "schur_convexity",
    "subadditivity": "subadditivity",
}


def _run_props(args) -> tuple[dict, int]:
    descriptor = _descriptor(args)
    report = properties.run_check(_PROPERTY_NAMES[args.property], descriptor,
                                  trials=args.trials, seed=args.seed, tol=args.tol)
    results = {
        "property": report.property_id,
        "measure": report.measure,
        "trials": report.trials,
        "seed": report.seed,
        "tol": report.tol,
        "violation_count": len(report.violations),
        "violations": [
            {"trial": v.trial, "description": v.description,
             "lhs": v.lhs, "rhs": v.rhs, "margin": v.margin}
            for v in report.violations
        ],
    }
    return results, (1 if report.violations else 0)


def _run_optimize_weights(args) -> tuple[dict, int]:
    topology = design.Topology.from_graph(_load_graph(args.topology))
    descriptor = _descriptor(args)
    options = design.SolverOptions(tol=args.tol, max_iters=args.max_iters)
    result = design.optimize_weights(topology, descriptor, options)
    results = {
        "edges": [[u, v] for u, v in topology.edges],
        "weights": list(result.weights),
        "objective": result.objective,
        "iterations": result.iterations,
        "stationarity_residual": result.stationarity_residual,
        "active_set": list(result.active_set),
    }
    return results, 0


def _run_rewire(args) -> tuple[dict, int]:
    descriptor = _descriptor(args)
    outcome = design.rewire_bruteforce(args.n, args.m, args.alpha, descriptor)
    results = {
        "best_edges": [[u, v] for u, v in outcome.ranking[0].edges],
        "best_value": outcome.value,
        "edge_weight": args.alpha / args.m,
        "ranking": [{"edges": [[u, v] for u, v in entry.edges], "value": entry.value}
                    for entry in outcome.ranking],
    }
    return results, 0


def _run_augment(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    candidates_graph = _load_graph(args.candidates)
    if candidates_graph.n != graph.n:
        raise SystemicError(
            f"candidate file is on {candidates_graph.n} nodes, graph on {graph.n}")
    candidates = [(u, v, w) for u, v, w in candidates_graph.edges]
    report = design.greedy_augment(graph, args.k, candidates, args.f)
    results = {
        "added": [[u, v, w] for u, v, w in report.added],
        "achieved": report.achieved,
        "bound": report.bound,
        "gap": report.gap,
    }
    return results, (1 if report.gap < -BOUND_BREACH_TOL else 0)


def _run_simulate_h2(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    spectrum = graph_spectrum(graph)
    lam2 = float(spectrum.nonzero[0])
    burn_in = args.burn_in
    if burn_in is None:
        burn_in = min(5.0 / lam2, args.horizon / 4.0)
    cfg = sim.SimConfig(dt=args.dt, horizon=args.horizon, burn_in=burn_in,
                        trials=args.trials, seed=args.seed)
    estimate, stderr = sim.estimate_h2(graph, cfg)
    closed_form = measures.evaluate(graph, MeasureDescriptor("energy1"))
    z_score = (estimate - closed_form) / stderr if stderr and stderr > 0 else math.nan
    results = {
        "estimate": estimate,
        "stderr": stderr,
        "closed_form": closed_form,
        "z_score": z_score,
        "burn_in": burn_in,
        "steps": int(round(args.horizon / args.dt)),
    }
    return results, 0


def _run_validate(args) -> tuple[dict, int]:
    graph = _load_graph(args.graph)
    lap = laplacian(graph)
    row_sum = float(np.abs(lap.matrix.sum(axis=1)).max())
    connected = is_connected(graph)
    results = {
        "n": graph.n,
        "edge_count": graph.m,
        "connected": connected,
        "weights_positive": True,  # enforced by the parser
        "max_laplacian_row_sum": row_sum,
        "round_trip_ok": parse_graph(serialize_graph(graph)) == graph,
    }
    if connected and graph.n >= 2:
        spectrum = graph_spectrum(graph)
        tol = zero_tolerance(spectrum.eigenvalues)
        results["zero_eigenvalue_count"] = int(
            np.sum(np.abs(spectrum.eigenvalues) <= tol))
        results["algebraic_connectivity"] = float(spectrum.nonzero[0])
        results["eigen_residual"] = spectrum.residual
    return results, 0


_COMMANDS = {
    "measure": _run_measure,
    "zeta": _run_zeta,
    "hpnorm": _run_hpnorm,
    "trees": _run_trees,
    "props": _run_props,
    "optimize-weights": _run_optimize_weights,
    "rewire": _run_rewire,
    "augment": _run_augment,
    "simulate-h2": _run_simulate_h2,
    "validate": _run_validate,
}


def _inputs_echo(args: argparse.Namespace) -> dict:
    skip = {"command"}
    echo = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        echo[key] = value
    return echo


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    start = _clock()
    warning_list: list[str] = []
    if args.command == "trees":
        warning_list.append(ENTROPY_FORM_WARNING)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, code = _COMMANDS[args.command](args)
        warning_list.extend(str(w.message) for w in caught)
    except (NumericalError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SystemicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    timing = _clock() - start
    emit_report(args.command, _inputs_echo(args), results, warning_list, timing)
    return code


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
