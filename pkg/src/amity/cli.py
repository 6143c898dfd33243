"""Command-line surface.

Every subcommand prints one JSON report on stdout and uses the exit-code
contract 0 = success, 1 = negative result (valid input, nothing found or a
claim failed), 2 = error.  Seeds default to a constant so bare invocations
reproduce; AMITY_CAP overrides the exhaustive cap, the --cap flag wins over
the environment.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional

from .cycles import compress, find_disjoint_cycles
from .digraph import Digraph, min_out_degree
from .engine import (
    SCAN_MODES,
    find_separable_vertex,
    reduce_to_strongly_connected,
    scan_for_counterexamples,
)
from .io import (
    GENERATOR_KINDS,
    GraphDocument,
    Report,
    STATUS_ERROR,
    STATUS_NEGATIVE,
    STATUS_OK,
    fraction_str,
    parse_kindspec,
    parse_partition,
    resolve_graph_arg,
    serialize_edge_list,
    generate,
)
from .oracle import CapExceeded, can_separate, enumerate_friendly, is_friendly
from .resample import (
    ResampleConfig,
    ResampleExhausted,
    TrialsExhausted,
    chernoff_r_separate,
    extract_small_subdigraph,
    lll_separate,
)
from .transitive import (
    AUTOMORPHISM_CAP,
    PreconditionError,
    check_class_structure,
    is_vertex_transitive,
    prime_separability,
    rotation_automorphisms,
)

DEFAULT_SEED = 0
_PARTITION_PREVIEW = 256


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _add_graph(p):
    p.add_argument(
        "--graph",
        required=True,
        help="edge-list file, .dot file, or generator spec like cycle:6",
    )


def _add_cap(p):
    p.add_argument("--cap", type=int, default=None, help="exhaustive-search cap on n")


def _add_seed(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _add_r(p, default=1):
    p.add_argument("--r", type=int, default=default)


def build_parser() -> _Parser:
    parser = _Parser(prog="amity", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("check", help="is a given partition friendly")
    _add_graph(p)
    _add_seed(p)
    p.add_argument("--partition", required=True, help="file with n lines of 0/1")
    _add_r(p)

    p = sub.add_parser("enumerate", help="all friendly partitions")
    _add_graph(p)
    _add_seed(p)
    _add_r(p)
    _add_cap(p)
    p.add_argument("--nontrivial", action="store_true", help="exclude the trivial partition")

    p = sub.add_parser("separate", help="friendly partition splitting a vertex set")
    _add_graph(p)
    _add_seed(p)
    p.add_argument("--set", required=True, help="comma-separated vertices, e.g. 0,1")
    _add_r(p)
    _add_cap(p)

    p = sub.add_parser("separable-vertex", help="vertex separable from all others")
    _add_graph(p)
    _add_seed(p)
    _add_cap(p)

    p = sub.add_parser("compress", help="contract undominated non-2-cycle edges")
    _add_graph(p)
    _add_seed(p)

    p = sub.add_parser("cycles", help="k pairwise disjoint cycles")
    _add_graph(p)
    _add_seed(p)
    p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("reduce-scc", help="separate a pair via the condensation")
    _add_graph(p)
    _add_seed(p)
    p.add_argument("--set", required=True, help="the pair u,v")
    _add_cap(p)

    p = sub.add_parser("lll-separate", help="randomized resampling separation")
    _add_graph(p)
    p.add_argument("--set", required=True, help="the pair u,v")
    _add_r(p)
    _add_seed(p)
    p.add_argument("--max-rounds", type=int, default=None, help="default 100n")
    p.add_argument("--mode", choices=("lll", "chernoff"), default="lll")

    p = sub.add_parser("extract-subdigraph", help="sub-half vertex set of min out-degree r")
    _add_graph(p)
    _add_r(p, default=2)
    _add_seed(p)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("transitive-analyze", help="separation-class structure checks")
    _add_graph(p)
    _add_seed(p)
    _add_cap(p)

    p = sub.add_parser("scan", help="hunt counterexamples over random/exhaustive corpora")
    p.add_argument("--d", type=int, required=True)
    _add_r(p)
    p.add_argument("--n-range", required=True, help="inclusive range a:b")
    p.add_argument("--mode", choices=SCAN_MODES, required=True)
    p.add_argument("--threshold", type=int, default=2)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    _add_seed(p)

    p = sub.add_parser("generate", help="emit a named digraph as an edge list")
    p.add_argument("--kind", required=True, choices=GENERATOR_KINDS)
    p.add_argument("--params", default="", help="colon-separated, e.g. 7:1,2,3")
    _add_seed(p)
    p.add_argument("--out", default=None, help="also write the edge list to this file")

    p = sub.add_parser("verify-theorems", help="run the full acceptance suite")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return parser


def _effective_cap(args) -> Optional[int]:
    cap = getattr(args, "cap", None)
    if cap is not None:
        return cap
    env = os.environ.get("AMITY_CAP")
    if env is None:
        return None
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"AMITY_CAP must be an integer, got {env!r}") from None


def _parse_set(text: str, pair: bool = False) -> list:
    try:
        vals = [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise ValueError(f"--set expects comma-separated integers, got {text!r}") from None
    if pair and len(vals) != 2:
        raise ValueError(f"--set expects exactly 2 vertices here, got {len(vals)}")
    if len(vals) < 2:
        raise ValueError("--set needs at least 2 vertices")
    return vals


def _load(args) -> GraphDocument:
    return resolve_graph_arg(args.graph, getattr(args, "seed", DEFAULT_SEED))


def _partition_json(p) -> dict:
    return {"block1": list(p.block_vertices(1))}


def _cmd_check(args):
    doc = _load(args)
    with open(args.partition, "r", encoding="utf-8") as fh:
        part = parse_partition(fh.read(), doc.n)
    ok = is_friendly(doc.graph, part, args.r)
    results = {"friendly": ok, "n": doc.n, "r": args.r}
    return (STATUS_OK, results, 0, doc) if ok else (STATUS_NEGATIVE, results, 1, doc)


def _cmd_enumerate(args):
    doc = _load(args)
    parts = enumerate_friendly(
        doc.graph, args.r, include_trivial=not args.nontrivial, cap=_effective_cap(args)
    )
    results = {
        "count": len(parts),
        "includes_trivial": not args.nontrivial,
        "n": doc.n,
        "r": args.r,
    }
    if len(parts) <= _PARTITION_PREVIEW:
        results["partitions"] = [_partition_json(p) for p in parts]
    else:
        results["partitions_preview"] = [
            _partition_json(p) for p in parts[:_PARTITION_PREVIEW]
        ]
    if parts:
        return STATUS_OK, results, 0, doc
    return STATUS_NEGATIVE, results, 1, doc


def _cmd_separate(args):
    doc = _load(args)
    s = _parse_set(args.set)
    p = can_separate(doc.graph, s, args.r, _effective_cap(args))
    if p is None:
        return STATUS_NEGATIVE, {"verdict": "inseparable", "set": sorted(set(s))}, 1, doc
    results = {"verdict": "separable", "set": sorted(set(s)), "partition": _partition_json(p)}
    return STATUS_OK, results, 0, doc


def _cmd_separable_vertex(args):
    doc = _load(args)
    found = find_separable_vertex(doc.graph, _effective_cap(args))
    if found is None:
        return STATUS_NEGATIVE, {"verdict": "none"}, 1, doc
    v, cert = found
    results = {"verdict": "found", "vertex": v, "witness_count": len(cert.witnesses)}
    return STATUS_OK, results, 0, doc


def _cmd_compress(args):
    doc = _load(args)
    out, trace = compress(doc.graph)
    results = {
        "original_n": doc.n,
        "compressed_n": out.n,
        "merges": len(trace.merges),
        "edge_list": serialize_edge_list(out),
    }
    return STATUS_OK, results, 0, doc


def _cmd_cycles(args):
    doc = _load(args)
    cs = find_disjoint_cycles(doc.graph, args.k)
    if cs is None:
        return STATUS_NEGATIVE, {"verdict": "absent", "k": args.k}, 1, doc
    results = {"verdict": "present", "k": args.k, "cycles": [list(c) for c in cs.cycles]}
    return STATUS_OK, results, 0, doc


def _cmd_reduce_scc(args):
    doc = _load(args)
    u, v = _parse_set(args.set, pair=True)
    plan = reduce_to_strongly_connected(doc.graph, u, v)
    results = {
        "case": plan.case,
        "sink_component_count": len(plan.sink_comps),
        "pair": [u, v],
    }
    if plan.sub_instances:
        sub = plan.sub_instances[0]
        results["sub_n"] = sub.graph.n
        sp = can_separate(sub.graph, sub.pair, 1, _effective_cap(args))
        if sp is None:
            results["verdict"] = "sub-instance-inseparable"
            return STATUS_NEGATIVE, results, 1, doc
        part = plan.lift(sp)
    else:
        part = plan.lift()
    results["verdict"] = "separated"
    results["partition"] = _partition_json(part)
    return STATUS_OK, results, 0, doc


def _cmd_lll_separate(args):
    doc = _load(args)
    u, v = _parse_set(args.set, pair=True)
    max_rounds = args.max_rounds if args.max_rounds is not None else 100 * max(doc.n, 1)
    config = ResampleConfig(seed=args.seed, max_rounds=max_rounds, r=args.r)
    fn = lll_separate if args.mode == "lll" else chernoff_r_separate
    try:
        part = fn(doc.graph, u, v, config)
    except ResampleExhausted as e:
        results = {"verdict": "exhausted", "rounds": e.rounds, "pair": [u, v], "mode": args.mode}
        return STATUS_NEGATIVE, results, 1, doc
    results = {
        "verdict": "separated",
        "pair": [u, v],
        "mode": args.mode,
        "partition": _partition_json(part),
    }
    return STATUS_OK, results, 0, doc


def _cmd_extract(args):
    doc = _load(args)
    try:
        s = extract_small_subdigraph(doc.graph, args.r, args.seed, args.trials)
    except TrialsExhausted as e:
        results = {"verdict": "exhausted", "sizes": list(e.sizes)}
        return STATUS_NEGATIVE, results, 1, doc
    results = {
        "verdict": "found",
        "n": doc.n,
        "y_size": len(s.y_set),
        "y_fraction": fraction_str(Fraction(len(s.y_set), doc.n)),
        "trials": s.trial_count,
        "y": sorted(s.y_set),
    }
    return STATUS_OK, results, 0, doc


def _cmd_transitive(args):
    doc = _load(args)
    g = doc.graph
    auts = rotation_automorphisms(g)
    transitive = auts.transitive
    evidence = "rotations"
    if not transitive and g.n <= AUTOMORPHISM_CAP:
        transitive = is_vertex_transitive(g)
        evidence = "search"
    if not transitive:
        results = {"transitive": False, "evidence": evidence}
        return STATUS_NEGATIVE, results, 1, doc
    cap = _effective_cap(args)
    verdict = check_class_structure(g, auts=auts if auts.transitive else None, cap=cap)
    results = {
        "transitive": True,
        "evidence": evidence,
        "degree": verdict.degree,
        "class_sizes": [len(c) for c in verdict.classes],
        "independence_ok": verdict.independence_ok,
        "spread_ok": verdict.spread_ok,
        "size_uniform_ok": verdict.size_uniform_ok,
    }
    prime_ok = None
    if verdict.degree >= 3:
        try:
            prime = prime_separability(g, auts=auts if auts.transitive else None, cap=cap)
            prime_ok = prime.ok
        except PreconditionError:
            prime_ok = None
    results["prime_singletons"] = prime_ok
    all_ok = verdict.ok and prime_ok is not False
    if not all_ok:
        results["dumps"] = list(verdict.dumps)
        if prime_ok is False:
            results["dumps"].append(prime.dump)
        return STATUS_NEGATIVE, results, 1, doc
    return STATUS_OK, results, 0, doc


def _cmd_scan(args):
    lo, sep, hi = args.n_range.partition(":")
    if not sep:
        raise ValueError(f"--n-range expects a:b, got {args.n_range!r}")
    try:
        n_values = range(int(lo), int(hi) + 1)
    except ValueError:
        raise ValueError(f"--n-range expects integers, got {args.n_range!r}") from None
    rep = scan_for_counterexamples(
        d=args.d,
        r=args.r,
        n_range=n_values,
        mode=args.mode,
        threshold=args.threshold,
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
    )
    results = rep.to_dict()
    if rep.hits:
        return STATUS_NEGATIVE, results, 1, None
    return STATUS_OK, results, 0, None


def _cmd_generate(args):
    spec = args.kind if not args.params else f"{args.kind}:{args.params}"
    kind, params = parse_kindspec(spec)
    g = generate(kind, params, args.seed)
    text = serialize_edge_list(g)
    doc = GraphDocument(name=spec, graph=g, metadata={"spec": spec})
    results = {"spec": spec, "n": g.n, "m": g.edge_count(), "edge_list": text}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        results["path"] = args.out
    return STATUS_OK, results, 0, doc


def _cmd_verify(args):
    from .verify import run_all

    only = None
    if args.only:
        try:
            only = [int(t) for t in args.only.split(",")]
        except ValueError:
            raise ValueError(f"--only expects comma-separated integers, got {args.only!r}") from None
    outcomes = run_all(only=only)
    results = {
        "criteria": [
            {"number": c.number, "title": c.title, "passed": c.passed, "detail": c.detail}
            for c in outcomes
        ],
        "all_passed": all(c.passed for c in outcomes),
    }
    if results["all_passed"]:
        return STATUS_OK, results, 0, None
    return STATUS_NEGATIVE, results, 1, None


_HANDLERS = {
    "check": _cmd_check,
    "enumerate": _cmd_enumerate,
    "separate": _cmd_separate,
    "separable-vertex": _cmd_separable_vertex,
    "compress": _cmd_compress,
    "cycles": _cmd_cycles,
    "reduce-scc": _cmd_reduce_scc,
    "lll-separate": _cmd_lll_separate,
    "extract-subdigraph": _cmd_extract,
    "transitive-analyze": _cmd_transitive,
    "scan": _cmd_scan,
    "generate": _cmd_generate,
    "verify-theorems": _cmd_verify,
}


def _error_report(command: str, code: str, message: str, seed=None) -> Report:
    return Report(
        command=command,
        status=STATUS_ERROR,
        results={},
        seed=seed,
        error={"code": code, "message": message},
    )


def run_command(argv) -> tuple:
    """Execute one CLI invocation; returns (Report, exit_code) without
    printing or exiting."""
    parser = build_parser()
    command = argv[0] if argv else ""
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        return _error_report(command, "usage", str(e)), 2
    if args.command is None:
        return _error_report("", "usage", "a subcommand is required"), 2
    seed = getattr(args, "seed", None)
    try:
        status, results, code, doc = _HANDLERS[args.command](args)
    except _UsageError as e:
        return _error_report(args.command, "usage", str(e), seed), 2
    except CapExceeded as e:
        return _error_report(args.command, "cap-exceeded", str(e), seed), 2
    except PreconditionError as e:
        return _error_report(args.command, "precondition", str(e), seed), 2
    except (ValueError, OSError) as e:
        return _error_report(args.command, "input", str(e), seed), 2
    report = Report(
        command=args.command,
        status=status,
        results=results,
        input_digest=doc.digest if doc is not None else None,
        seed=seed,
    )
    return report, code


def main(argv=None) -> int:
    report, code = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
