"""Executable acceptance checks for the library's structural claims.

Each criterion_N function grades one claim at desk scale and returns a
CriterionResult; run_all executes a selection.  Zero-tolerance checks
assert exact statements (every corpus graph, every certificate); the two
randomized criteria grade success rates against their stated budgets.
Where a claim has an independent second route (a vectorized recount, a
fresh re-validation), both routes run and must agree.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .cycles import find_disjoint_cycles, is_dominated
from .digraph import Digraph, Partition, min_out_degree, verify_cycle_set
from .engine import (
    attach_pendants,
    attach_separator_cycle,
    find_separable_vertex,
    reduce_to_strongly_connected,
    sample_d_out_digraph,
)
from .extremal import fully_dominated_cubic
from .io import fraction_str, generate
from .oracle import (
    can_separate,
    enumerate_friendly,
    is_friendly,
    iter_out_degree_exact_digraphs,
    separation_report,
)
from .resample import (
    ResampleConfig,
    ResampleExhausted,
    compute_dr,
    expected_y_fraction,
    extract_small_subdigraph,
    lll_separate,
)
from .transitive import check_class_structure, prime_separability, rotation_automorphisms


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: dict


def _elapsed(t0: float) -> int:
    return int(time.monotonic() - t0)


# ---- shared fixtures ----

def _random_in_out_regular(n: int, d: int, rng: random.Random) -> Digraph:
    """Union of d random permutations, swap-repaired so no permutation has a
    fixed point or reuses an edge; every in- and out-degree is exactly d."""
    if not 1 <= d < n:
        raise ValueError(f"degree {d} infeasible on {n} vertices")
    edges = set()
    rows = [[] for _ in range(n)]
    for _ in range(d):
        perm = list(range(n))
        rng.shuffle(perm)
        for _ in range(100_000):
            bad = [i for i in range(n) if perm[i] == i or (i, perm[i]) in edges]
            if not bad:
                break
            i = bad[0]
            j = rng.randrange(n)
            perm[i], perm[j] = perm[j], perm[i]
        else:
            raise RuntimeError("permutation repair did not converge")
        for i, t in enumerate(perm):
            edges.add((i, t))
            rows[i].append(t)
    return Digraph.from_out_lists(n, rows)


def _layered_multi_scc(n: int, rng: random.Random) -> Digraph:
    """Random 3-out digraph with guaranteed multiple strongly connected
    components: two closed 4-vertex blocks at the bottom (each forced to be
    a complete digraph), the rest free to point anywhere."""
    if n < 10:
        raise ValueError("need at least 10 vertices")
    rows = []
    for v in range(n):
        if v < 4:
            rows.append([w for w in range(4) if w != v])
        elif v < 8:
            rows.append([w for w in range(4, 8) if w != v])
        else:
            rows.append(sorted(rng.sample([w for w in range(n) if w != v], 3)))
    return Digraph.from_out_lists(n, rows)


def _funnel_fixture() -> tuple:
    """Pair instance whose every route to the bottom passes one cut vertex:
    a 4-vertex cluster around the pair, a relay, and a complete-4 bottom."""
    rows = [
        [1, 2, 4],
        [0, 3, 4],
        [1, 3, 4],
        [0, 2, 4],
        [5, 6, 7],
        [6, 7, 8],
        [5, 7, 8],
        [5, 6, 8],
        [5, 6, 7],
    ]
    return Digraph(9, rows), 0, 1


def _single_entry_fixture() -> tuple:
    """Pair instance where the upper cluster's only edge into the bottom
    component lands exactly on the paired bottom vertex."""
    rows = [
        [1, 2, 4],
        [0, 2, 3],
        [0, 1, 3],
        [0, 1, 2],
        [5, 6, 7],
        [4, 6, 7],
        [4, 5, 7],
        [4, 5, 6],
    ]
    return Digraph(8, rows), 0, 4


def _underlying_connected(g: Digraph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    queue = [0]
    while queue:
        v = queue.pop()
        for w in list(g.out_adj[v]) + list(g.in_adj[v]):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def _friendly_count_table(n: int, d: int) -> np.ndarray:
    """Independent recount for the exhaustive d-out corpus on n vertices.

    For each vertex and each possible out-neighborhood, precompute a bitmask
    over all canonical partitions marking where that vertex is satisfied;
    AND the masks across vertices by array broadcast and popcount.  Returns
    the per-graph friendly-partition counts (trivial included), in the same
    order the corpus iterator produces graphs."""
    part_count = 1 << (n - 1)
    if part_count > 32:
        raise ValueError("table route supports n <= 6")
    full = (1 << n) - 1
    per_vertex = []
    for v in range(n):
        choices = list(itertools.combinations([w for w in range(n) if w != v], d))
        bits = np.zeros(len(choices), dtype=np.uint32)
        for ci, choice in enumerate(choices):
            mv = sum(1 << h for h in choice)
            acc = 0
            for t in range(part_count):
                m1 = t << 1
                side = m1 if m1 >> v & 1 else full ^ m1
                if mv & side:
                    acc |= 1 << t
            bits[ci] = acc
        per_vertex.append(bits)
    acc = per_vertex[0].reshape((-1,) + (1,) * (n - 1))
    for v in range(1, n):
        shape = [1] * n
        shape[v] = -1
        acc = acc & per_vertex[v].reshape(shape)
    return np.bitwise_count(acc).ravel()


# ---- criteria ----

def criterion_1() -> CriterionResult:
    """Every digraph with all out-degrees exactly 3 and n in {4, 5, 6} has
    at least 2 friendly partitions (trivial included)."""
    t0 = time.monotonic()
    detail = {}
    passed = True
    for n in (4, 5, 6):
        table = _friendly_count_table(n, 3)
        min_api = None
        graphs = 0
        agreements = 0
        mismatches = 0
        below = 0
        for idx, g in enumerate(iter_out_degree_exact_digraphs(n, 3)):
            graphs += 1
            c = len(enumerate_friendly(g, 1, include_trivial=True))
            if min_api is None or c < min_api:
                min_api = c
            if c < 2:
                below += 1
            if idx % 997 == 0:
                if c == int(table[idx]):
                    agreements += 1
                else:
                    mismatches += 1
        min_table = int(table.min())
        detail[str(n)] = {
            "graphs": graphs,
            "min_count": min_api,
            "min_count_recount": min_table,
            "spot_agreements": agreements,
        }
        passed = (
            passed
            and graphs == len(table)
            and below == 0
            and min_table >= 2
            and mismatches == 0
        )
    detail["seconds"] = _elapsed(t0)
    passed = passed and detail["seconds"] <= 600
    return CriterionResult(1, "3-out corpus has >= 2 friendly partitions", passed, detail)


def criterion_2() -> CriterionResult:
    """Two vertex-disjoint cycles exist in every graph of the 3-out corpus,
    and every returned pair re-verifies against the original digraph."""
    t0 = time.monotonic()
    detail = {}
    passed = True
    for n in (4, 5, 6):
        graphs = 0
        missing = 0
        for g in iter_out_degree_exact_digraphs(n, 3):
            graphs += 1
            cs = find_disjoint_cycles(g, 2)
            if cs is None:
                missing += 1
                continue
            verify_cycle_set(g, cs)
        detail[str(n)] = {"graphs": graphs, "missing": missing}
        passed = passed and missing == 0
    detail["seconds"] = _elapsed(t0)
    return CriterionResult(2, "3-out corpus always packs 2 disjoint cycles", passed, detail)


def criterion_3() -> CriterionResult:
    """The complete digraph on 5 vertices packs 2 disjoint cycles but
    not 3."""
    g = generate("complete", (5,))
    two = find_disjoint_cycles(g, 2)
    three = find_disjoint_cycles(g, 3)
    if two is not None:
        verify_cycle_set(g, two)
    detail = {
        "two_disjoint": two is not None,
        "three_disjoint": three is not None,
    }
    passed = two is not None and three is None
    return CriterionResult(3, "complete-5 cycle packing boundary", passed, detail)


def criterion_4() -> CriterionResult:
    """Directed cycles (n = 3..8) and the complete digraph on 3 vertices
    have no nontrivial friendly partition and no separable pair."""
    passed = True
    detail = {}
    instances = [(f"cycle:{n}", generate("cycle", (n,))) for n in range(3, 9)]
    instances.append(("complete:3", generate("complete", (3,))))
    for name, g in instances:
        nontrivial = len(enumerate_friendly(g, 1, include_trivial=False))
        rep = separation_report(g)
        one_class = len(rep.classes) == 1
        pair_hits = 0
        for u, v in itertools.combinations(range(g.n), 2):
            if can_separate(g, (u, v)) is not None:
                pair_hits += 1
        detail[name] = {
            "nontrivial_partitions": nontrivial,
            "separable_pairs": pair_hits,
            "single_class": one_class,
        }
        passed = passed and nontrivial == 0 and pair_hits == 0 and one_class
    return CriterionResult(4, "cycles and complete-3 are inseparable", passed, detail)


_CAPTION_SPLITS = {
    "right": (("u1", "u2", "u3"), ("v", "w2", "u2")),
    "left": (("x", "u1", "u2", "u3"), ("x", "u1", "w1", "w3")),
}


def criterion_5() -> CriterionResult:
    """The two fully-dominated cubic digraphs satisfy all four defining
    conditions and their published friendly splits check out."""
    passed = True
    detail = {}
    for variant in ("right", "left"):
        g, labels = fully_dominated_cubic(variant)
        out_ok = all(g.out_degree(v) == 3 for v in range(g.n))
        no_two_cycles = all(not g.has_edge(h, v) for v, h in g.edges())
        dominated = all(is_dominated(g, v, h) for v, h in g.edges())
        connected = _underlying_connected(g)
        splits_ok = []
        for names in _CAPTION_SPLITS[variant]:
            block1 = {labels[name] for name in names}
            p = Partition(tuple(1 if v in block1 else 0 for v in range(g.n)))
            splits_ok.append(is_friendly(g, p, 1))
        detail[variant] = {
            "n": g.n,
            "out_degrees_3": out_ok,
            "no_2_cycles": no_two_cycles,
            "all_edges_dominated": dominated,
            "connected": connected,
            "friendly_splits": splits_ok,
        }
        passed = passed and out_ok and no_two_cycles and dominated and connected and all(splits_ok)
    return CriterionResult(5, "fully-dominated cubic digraphs and their splits", passed, detail)


def criterion_6() -> CriterionResult:
    """Random 15-out digraphs (n in 16..22) always contain a vertex
    separable from every other vertex; each certificate re-validates within
    a minute per instance."""
    t0 = time.monotonic()
    found = 0
    max_seconds = 0
    trials = 50
    for idx in range(trials):
        n = 16 + idx % 7
        g = sample_d_out_digraph(n, 15, random.Random(f"sep15:{idx}"))
        t1 = time.monotonic()
        hit = find_separable_vertex(g)
        seconds = int(time.monotonic() - t1) + 1
        max_seconds = max(max_seconds, seconds)
        if hit is None:
            continue
        v, cert = hit
        cert.validate(g)
        found += 1
    detail = {
        "trials": trials,
        "found": found,
        "max_instance_seconds": max_seconds,
        "seconds": _elapsed(t0),
    }
    passed = found == trials and max_seconds <= 60
    return CriterionResult(6, "15-out digraphs have a separable vertex", passed, detail)


def criterion_7() -> CriterionResult:
    """Resampling separates random pairs in 9-in-9-out-regular digraphs
    (n in 50..200) within 100n rounds at a >= 99% rate; every success
    re-validates as friendly and separating."""
    t0 = time.monotonic()
    trials = 100
    successes = 0
    invalid = 0
    exhausted = 0
    for idx in range(trials):
        n = 50 + (idx * 150) // (trials - 1)
        rng = random.Random(f"lll:{idx}")
        g = _random_in_out_regular(n, 9, rng)
        u, v = rng.sample(range(n), 2)
        config = ResampleConfig(seed=idx, max_rounds=100 * n, r=1)
        try:
            p = lll_separate(g, u, v, config)
        except ResampleExhausted:
            exhausted += 1
            continue
        if is_friendly(g, p, 1) and p.block[u] != p.block[v]:
            successes += 1
        else:
            invalid += 1
    detail = {
        "trials": trials,
        "successes": successes,
        "exhausted": exhausted,
        "invalid": invalid,
        "seconds": _elapsed(t0),
    }
    passed = invalid == 0 and successes >= 99
    return CriterionResult(7, "resampling separates 9-regular pairs", passed, detail)


def criterion_8() -> CriterionResult:
    """Sampling a sub-half vertex set of induced min out-degree 2 from
    random 10-out digraphs on 1000 vertices: construction always valid,
    empirical mean |Y|/n at most 0.46, and the exact expectation formula
    evaluates below 0.46."""
    t0 = time.monotonic()
    trials = 100
    n = 1000
    sizes = []
    induced_failures = 0
    for i in range(trials):
        g = sample_d_out_digraph(n, 10, random.Random(f"extract:{i}"))
        s = extract_small_subdigraph(g, r=2, seed=i, max_trials=100)
        sub, _ = g.induced(s.y_set)
        if min_out_degree(sub) < 2:
            induced_failures += 1
        sizes.append(len(s.y_set))
    mean = Fraction(sum(sizes), trials * n)
    exact = expected_y_fraction(10, 2)
    formula = Fraction(1, 3) + 2 * Fraction(2, 3) ** 10 + Fraction(10, 3) * Fraction(2, 3) ** 9
    detail = {
        "trials": trials,
        "mean_fraction": fraction_str(mean),
        "max_size": max(sizes),
        "induced_failures": induced_failures,
        "exact_expectation": fraction_str(exact),
        "degree_for_r2": compute_dr(2),
        "seconds": _elapsed(t0),
    }
    passed = (
        induced_failures == 0
        and mean <= Fraction(46, 100)
        and exact == formula
        and exact < Fraction(46, 100)
        and compute_dr(2) <= 10
    )
    return CriterionResult(8, "random extraction yields small dense subdigraphs", passed, detail)


def criterion_9() -> CriterionResult:
    """Internal consistency on small 3-out instances: fully separable
    digraphs carry enough partitions to tell all vertices apart
    (2^count >= n); pendant attachment preserves partition counts when its
    targets form one inseparability class; any friendly partition splitting
    an attached cycle also splits the cycle's targets."""
    t0 = time.monotonic()
    passed = True

    qualifying = 0
    count_failures = 0
    samples = 40
    for i in range(samples):
        n = 8 + i % 7
        g = sample_d_out_digraph(n, 3, random.Random(f"count:{i}"))
        rep = separation_report(g)
        if all(len(c) == 1 for c in rep.classes):
            qualifying += 1
            if 2 ** rep.partition_count < n:
                count_failures += 1
    passed = passed and count_failures == 0 and qualifying >= 20

    pendant_checks = []
    two_triangles = generate("disjoint_union", (("complete", (3,)), ("complete", (3,))))
    three_triangles = generate(
        "disjoint_union", (("complete", (3,)), ("complete", (3,)), ("complete", (3,)))
    )
    for base, targets in ((two_triangles, (0, 1, 2)), (three_triangles, (0, 1, 2))):
        rep = separation_report(base)
        assert tuple(sorted(targets)) in rep.classes, "targets must form one class"
        before = len(enumerate_friendly(base, 1, include_trivial=True))
        ext = attach_pendants(base, targets, base.n + 3)
        after = len(enumerate_friendly(ext.extended, 1, include_trivial=True))
        identity = attach_pendants(base, targets, base.n)
        pendants_indegree0 = all(
            ext.extended.in_degree(w) == 0 for w in ext.new_vertices
        )
        ok = (
            before == after
            and identity.extended == base
            and pendants_indegree0
        )
        pendant_checks.append({"n": base.n, "count_before": before, "count_after": after, "ok": ok})
        passed = passed and ok

    cycle_checks = []
    k4 = generate("complete", (4,))
    for g, targets, s in ((k4, (0, 1), 4), (k4, tuple(range(4)), 3), (k4, (1, 2, 3), 2)):
        res = attach_separator_cycle(g, targets, s)
        ext = res.extended
        new = set(res.new_vertices)
        split_partitions = 0
        violations = 0
        for p in enumerate_friendly(ext, 1, include_trivial=True):
            blocks_on_cycle = {p.block[w] for w in new}
            if len(blocks_on_cycle) < 2:
                continue
            split_partitions += 1
            if len({p.block[w] for w in targets}) < 2:
                violations += 1
        ok = violations == 0 and split_partitions > 0 and res.degree_preserved
        cycle_checks.append(
            {
                "targets": len(targets),
                "cycle_len": s,
                "cycle_splitting_partitions": split_partitions,
                "violations": violations,
                "ok": ok,
            }
        )
        passed = passed and ok

    detail = {
        "fully_separable_instances": qualifying,
        "count_bound_failures": count_failures,
        "pendants": pendant_checks,
        "separator_cycles": cycle_checks,
        "seconds": _elapsed(t0),
    }
    return CriterionResult(9, "partition-count bounds and gadget contracts", passed, detail)


def criterion_10() -> CriterionResult:
    """Pair separation through the condensation: on multi-component 3-out
    instances, whenever the planned sub-instance separation succeeds the
    lifted partition is friendly and splits the pair."""
    t0 = time.monotonic()
    case_tally = {}
    lifted = 0
    lift_failures = 0
    sub_inseparable = 0
    instances = []
    for i in range(200):
        n = 10 + i % 7
        rng = random.Random(f"scc:{i}")
        g = _layered_multi_scc(n, rng)
        for _ in range(3):
            u, v = rng.sample(range(n), 2)
            instances.append((g, u, v))
    for fixture in (_funnel_fixture, _single_entry_fixture):
        instances.append(fixture())

    for g, u, v in instances:
        plan = reduce_to_strongly_connected(g, u, v)
        case_tally[plan.case] = case_tally.get(plan.case, 0) + 1
        if plan.sub_instances:
            sub = plan.sub_instances[0]
            sp = can_separate(sub.graph, sub.pair, 1)
            if sp is None:
                sub_inseparable += 1
                continue
            p = plan.lift(sp)
        else:
            p = plan.lift()
        if is_friendly(g, p, 1) and p.block[u] != p.block[v]:
            lifted += 1
        else:
            lift_failures += 1

    detail = {
        "instances": len(instances),
        "lifted": lifted,
        "lift_failures": lift_failures,
        "sub_inseparable": sub_inseparable,
        "cases": dict(sorted(case_tally.items())),
        "seconds": _elapsed(t0),
    }
    passed = (
        lift_failures == 0
        and lifted > 0
        and case_tally.get("menger-cut", 0) >= 1
        and case_tally.get("single-entry", 0) >= 1
        and len(case_tally) >= 5
    )
    return CriterionResult(10, "condensation reductions lift correctly", passed, detail)


def criterion_11() -> CriterionResult:
    """Circulant sweep (n in {5, 7, 11}, 3 to n-1 offsets): separation
    classes are singletons on a prime vertex count, independent as sets,
    equally sized, and every out-neighborhood meets at least 3 classes."""
    t0 = time.monotonic()
    total = 0
    failures = []
    per_n = {}
    for n in (5, 7, 11):
        count = 0
        for size in range(3, n):
            for offsets in itertools.combinations(range(1, n), size):
                g = generate("circulant", (n, offsets))
                auts = rotation_automorphisms(g)
                assert auts.transitive, "circulants are rotation-transitive"
                verdict = check_class_structure(g, auts=auts)
                prime = prime_separability(g, auts=auts)
                ok = (
                    verdict.independence_ok
                    and verdict.spread_ok is True
                    and verdict.size_uniform_ok
                    and prime.ok
                )
                if not ok:
                    failures.append(
                        {
                            "n": n,
                            "offsets": list(offsets),
                            "dumps": list(verdict.dumps) + ([prime.dump] if prime.dump else []),
                        }
                    )
                count += 1
                total += 1
        per_n[str(n)] = count
    detail = {
        "instances": total,
        "per_n": per_n,
        "failures": failures,
        "seconds": _elapsed(t0),
    }
    passed = total == 1015 and not failures
    return CriterionResult(11, "circulant class structure holds across the zoo", passed, detail)


def criterion_12() -> CriterionResult:
    """Every seeded command, run twice, produces byte-identical JSON
    reports; a sharded scan matches its single-worker run."""
    from .cli import run_command

    t0 = time.monotonic()
    cases = [
        ["generate", "--kind", "random_d_out", "--params", "12:3", "--seed", "7"],
        ["enumerate", "--graph", "random_d_out:10:3", "--seed", "3"],
        ["separate", "--graph", "circulant:7:1,2,3", "--set", "0,3"],
        ["cycles", "--graph", "random_d_out:12:3", "--seed", "5", "--k", "2"],
        ["lll-separate", "--graph", "random_d_out:30:9", "--seed", "11", "--set", "0,1"],
        ["extract-subdigraph", "--graph", "random_d_out:200:10", "--seed", "2", "--r", "2"],
        ["scan", "--d", "2", "--n-range", "3:4", "--mode", "pair-separability", "--seed", "1"],
        ["separable-vertex", "--graph", "random_d_out:17:15", "--seed", "9"],
        ["transitive-analyze", "--graph", "circulant:11:1,2,3"],
        ["compress", "--graph", "random_d_out:14:3", "--seed", "6"],
    ]
    mismatches = []
    errored = []
    for argv in cases:
        rep1, code1 = run_command(argv)
        rep2, code2 = run_command(argv)
        if rep1.to_json() != rep2.to_json() or code1 != code2:
            mismatches.append(argv)
        if rep1.status == "error" or code1 not in (0, 1):
            errored.append(argv)

    shard_args = [
        "scan",
        "--d",
        "3",
        "--n-range",
        "6:6",
        "--mode",
        "partition-count",
        "--samples",
        "30",
        "--seed",
        "4",
    ]
    rep_one, _ = run_command(shard_args)
    rep_two, _ = run_command(shard_args + ["--workers", "2"])
    shards_agree = rep_one.to_json() == rep_two.to_json()

    detail = {
        "commands": len(cases),
        "mismatches": mismatches,
        "errored": errored,
        "sharded_scan_agrees": shards_agree,
        "seconds": _elapsed(t0),
    }
    passed = not mismatches and not errored and shards_agree
    return CriterionResult(12, "seeded commands reproduce byte-identically", passed, detail)


ALL_CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
)


def run_all(only=None) -> list:
    """Run the acceptance checks (all, or the listed numbers).  A crashing
    criterion is reported failed, not raised."""
    if only is not None:
        unknown = set(only) - set(range(1, len(ALL_CRITERIA) + 1))
        if unknown:
            raise ValueError(f"unknown criterion numbers {sorted(unknown)}")
    results = []
    for i, fn in enumerate(ALL_CRITERIA, start=1):
        if only is not None and i not in only:
            continue
        try:
            results.append(fn())
        except Exception as e:  # graded, not raised: the suite must finish
            title = fn.__doc__.split("\n")[0] if fn.__doc__ else ""
            results.append(CriterionResult(i, title, False, {"crash": repr(e)}))
    return results
