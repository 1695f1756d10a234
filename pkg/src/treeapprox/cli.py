"""Command-line entry point.

Subcommands: analyze, build-nagata, build-gupta, search-opt, extend, gen.
Every run writes a JSON report; rationals appear as authoritative "p/q"
strings next to a convenience decimal.  Exit codes: 0 ok, 2 input error,
3 internal assertion or bound violation.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BoundViolation, InputError
from .extend import ValuedSubset, lipschitz_extend
from .fixtures import (
    gen_adic,
    gen_binary_leaves,
    gen_cycle,
    gen_example33,
    gen_random_treeset,
    gen_random_ultrametric,
)
from .gupta import gupta_tree, trace_pairs, verify_gupta_bounds
from .hierarchy import build_hierarchy, verify_hierarchy_bounds
from .io import (
    load_labels,
    load_metric,
    load_values,
    save_metric,
    save_tree,
    save_values,
)
from .metric import MetricSpace, nagata_constant
from .search import (
    improve_local,
    min_distortion_bnb,
    min_distortion_exhaustive,
)
from .trees import WeightedTree, distortion

THREADS_ENV = "TREEAPPROX_THREADS"


def _rat(x: Fraction | None) -> dict | None:
    if x is None:
        return None
    x = Fraction(x)
    return {"rational": str(x), "decimal": float(x)}


def _digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _distortion_payload(X: MetricSpace, T: WeightedTree) -> dict:
    rep = distortion(X, T)
    return {
        "expansion": _rat(rep.expansion),
        "contraction": _rat(rep.contraction),
        "distortion": _rat(rep.distortion),
        "witness_expand": list(rep.witness_expand) if rep.witness_expand else None,
        "witness_contract": list(rep.witness_contract) if rep.witness_contract else None,
    }


def _nagata_payload(X: MetricSpace) -> dict:
    rep = nagata_constant(X)
    return {
        "constant": _rat(rep.constant),
        "witness_scale": _rat(rep.witness_scale),
        "witness_block": sorted(X.points[i] for i in rep.witness_block),
        "is_ultrametric": rep.is_ultrametric,
        "is_zero_hyperbolic": rep.is_zero_hyperbolic,
        "separation": _rat(rep.separation),
        "diameter": _rat(rep.diameter),
    }


def _write_report(path: str | None, doc: dict) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _report_doc(args, payload: dict, started: float, input_path=None) -> dict:
    doc = {
        "command": getattr(args, "argv_echo", [args.cmd]),
        "version": __version__,
        "input_digest": _digest(input_path) if input_path else None,
        "timing_seconds": round(time.monotonic() - started, 6),
    }
    doc.update(payload)
    return doc


def _cmd_analyze(args) -> int:
    started = time.monotonic()
    X = load_metric(args.input)
    payload = {"n_points": X.n, "analysis": _nagata_payload(X)}
    _write_report(args.report, _report_doc(args, payload, started, args.input))
    if args.figure:
        from .plotting import scale_profile_figure

        scale_profile_figure(X, args.figure)
    return 0


def _cmd_build_nagata(args) -> int:
    started = time.monotonic()
    X = load_metric(args.input)
    T = verify_hierarchy_bounds(X, root=args.root)
    H = build_hierarchy(X, root=args.root)
    c = nagata_constant(X).constant
    bound = 8 * c * (1 - Fraction(1, 2**H.levels))
    save_tree(T, args.out)
    payload = {
        "method": "nagata",
        "root": X.points[H.root_point],
        "levels": H.levels,
        "nagata_constant": _rat(c),
        "bound": _rat(bound),
        "distortion": _distortion_payload(X, T),
        "tree_digest": _digest(args.out),
    }
    _write_report(args.report, _report_doc(args, payload, started, args.input))
    if args.figure:
        from .plotting import distortion_figure

        distortion_figure(X, T, args.figure, bound=bound)
    return 0


def _trace_doc(runs) -> dict:
    comps = []
    for comp, run in runs:
        entry = {
            "boundary": sorted(run.boundary_leaves),
            "edges": [list(e) for e in run.edges],
        }
        if len(run.boundary_leaves) >= 2:
            entry["root_claim"] = run.root_claim
            entry["frontier"] = [
                {
                    "depth": str(Fraction(v.depth)),
                    "claim": v.claim.label,
                }
                for v in run.v_nodes
                if not v.from_tail
            ]
            entry["pairs"] = [
                {
                    "x": tr.x,
                    "x_prime": tr.x_prime,
                    "m": tr.m,
                    "term_one": _rat(tr.term_one),
                    "term_two": _rat(tr.term_two),
                    "term_two_bound": _rat(tr.term_two_bound),
                    "ck_checks": [
                        {"ck": _rat(c_), "bound": _rat(b_)}
                        for c_, b_ in tr.ck_checks
                    ],
                    "holds": tr.holds(),
                }
                for tr in trace_pairs(run)
            ]
        comps.append(entry)
    return {"components": comps}


def _cmd_build_gupta(args) -> int:
    started = time.monotonic()
    X = load_metric(args.input)
    T = verify_gupta_bounds(X, trace=bool(args.trace))
    _, runs = gupta_tree(X, with_runs=True)
    save_tree(T, args.out)
    payload = {
        "method": "gupta",
        "component_count": len(runs),
        "bound": _rat(Fraction(8)),
        "distortion": _distortion_payload(X, T),
        "tree_digest": _digest(args.out),
    }
    _write_report(args.report, _report_doc(args, payload, started, args.input))
    if args.trace:
        Path(args.trace).write_text(
            json.dumps(_trace_doc(runs), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    if args.figure:
        from .plotting import distortion_figure

        distortion_figure(X, T, args.figure, bound=Fraction(8))
    return 0


def _cmd_search_opt(args) -> int:
    started = time.monotonic()
    X = load_metric(args.input)
    if args.method == "exhaustive":
        res = min_distortion_exhaustive(X, threads=args.threads)
    elif args.method == "bnb":
        res = min_distortion_bnb(X, node_budget=args.budget)
    else:
        # local search from the dyadic-hierarchy tree
        from .hierarchy import nagata_tree

        start = nagata_tree(X)
        T = improve_local(X, start, seed=args.seed)
        rep = distortion(X, T)
        res = None
        best_tree, best_val, lb, examined = T, rep.distortion, Fraction(0), 0
    if res is not None:
        best_tree, best_val = res.best_tree, res.best_distortion
        lb, examined = res.lower_bound, res.trees_examined
    save_tree(best_tree, args.out)
    payload = {
        "method": args.method,
        "best_distortion": _rat(best_val),
        "lower_bound": _rat(lb),
        "trees_examined": examined,
        "distortion": _distortion_payload(X, best_tree),
        "tree_digest": _digest(args.out),
    }
    _write_report(args.report, _report_doc(args, payload, started, args.input))
    if args.figure:
        from .plotting import distortion_figure

        distortion_figure(X, best_tree, args.figure, bound=best_val)
    return 0


def _cmd_extend(args) -> int:
    started = time.monotonic()
    X = load_metric(args.input)
    labels = load_labels(args.subset)
    values = load_values(args.values, labels)
    data = ValuedSubset(tuple(labels), values)
    res = lipschitz_extend(X, data, method=args.method)
    save_values(res.extended, list(X.points), args.out)
    payload = {
        "method": args.method,
        "subset_size": len(labels),
        "dim": data.dim,
        "achieved_lip": res.achieved_lip,
        "guaranteed_lip": _rat(res.guaranteed_lip),
        "scaffold_edges": len(res.scaffold.edges),
        "values_digest": _digest(args.out),
    }
    _write_report(args.report, _report_doc(args, payload, started, args.input))
    return 0


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "binary-leaves":
        X = gen_binary_leaves(_need(args.n, "--n"))
    elif fam == "cycle":
        X = gen_cycle(_need(args.n, "--n"))
    elif fam == "adic":
        X = gen_adic(_need(args.k, "--k"))
    elif fam == "example33":
        X = gen_example33(_need(args.N, "--N"))
    elif fam == "random-ultrametric":
        X = gen_random_ultrametric(_need(args.n, "--n"), args.seed)
    elif fam == "random-treeset":
        X = gen_random_treeset(_need(args.n, "--n"), args.seed)
    else:
        raise InputError(f"unknown family {fam!r}")
    save_metric(X, args.out)
    return 0


def _need(value, flag: str) -> int:
    if value is None:
        raise InputError(f"{flag} is required for this family")
    return value


def _build_parser() -> argparse.ArgumentParser:
    default_threads = int(os.environ.get(THREADS_ENV, "1"))
    ap = argparse.ArgumentParser(
        prog="treeapprox",
        description="Tree approximations of finite metric spaces.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", help="metric invariants and dimension-zero constant")
    p.add_argument("--input", required=True)
    p.add_argument("--report")
    p.add_argument("--figure", help="write a scale-profile figure (PNG)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("build-nagata", help="dyadic-hierarchy spanning tree")
    p.add_argument("--input", required=True)
    p.add_argument("--root", help="anchor point label")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--figure", help="write a distortion scatter (PNG)")
    p.set_defaults(func=_cmd_build_nagata)

    p = sub.add_parser("build-gupta", help="sphere-halving spanning tree")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--trace", help="write per-pair proof-term trace (JSON)")
    p.add_argument("--figure", help="write a distortion scatter (PNG)")
    p.set_defaults(func=_cmd_build_gupta)

    p = sub.add_parser("search-opt", help="minimum-distortion spanning tree search")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["exhaustive", "bnb", "local"], required=True)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=default_threads)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--figure", help="write a distortion scatter (PNG)")
    p.set_defaults(func=_cmd_search_opt)

    p = sub.add_parser("extend", help="Lipschitz extension over a tree scaffold")
    p.add_argument("--input", required=True)
    p.add_argument("--subset", required=True, help="file with one label per line")
    p.add_argument("--values", required=True, help="value rows aligned with the subset")
    p.add_argument("--method", choices=["nagata", "gupta"], default="nagata")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("gen", help="generate a fixture metric")
    p.add_argument(
        "--family",
        required=True,
        choices=[
            "binary-leaves",
            "cycle",
            "adic",
            "example33",
            "random-ultrametric",
            "random-treeset",
        ],
    )
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)
    return ap


def _error_doc(kind: str, exc: Exception) -> str:
    return json.dumps(
        {"error": kind, "type": type(exc).__name__, "message": str(exc)},
        sort_keys=True,
    )


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = ap.parse_args(argv)
    args.argv_echo = list(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(_error_doc("input", e), file=sys.stderr)
        return 2
    except OSError as e:
        print(_error_doc("io", e), file=sys.stderr)
        return 2
    except (BoundViolation, AssertionError) as e:
        # a violated proof bound is a bug, never swallowed
        print(_error_doc("bound", e), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
