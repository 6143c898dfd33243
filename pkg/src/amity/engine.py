"""Separation engines: singleton-class vertices, gadget constructions, and
reduction of pair separation to strongly connected instances.

Vertices u, v are in the same separation class when no friendly partition
splits them; a separable vertex is one whose class is a singleton, certified
by one witness partition per other vertex.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cycles import find_intersecting_pair_plus_disjoint
from .digraph import (
    Digraph,
    Partition,
    VertexId,
    min_out_degree,
    strongly_connected_components,
    vertex_disjoint_paths_and_separator,
)
from .oracle import (
    CapExceeded,
    _friendly_block1_masks,
    _friendly_masks_numpy,
    _NUMPY_MIN_N,
    can_separate,
    extend_friendly_sets,
    is_friendly,
    iter_out_degree_exact_digraphs,
    count_out_degree_exact_digraphs,
    separation_report,
)

log = logging.getLogger("amity.engine")


@dataclass(frozen=True)
class SeparationCertificate:
    """One witness partition per foreign vertex, splitting it from subject."""

    subject: VertexId
    witnesses: tuple  # of (other_vertex, Partition)

    def validate(self, g: Digraph, r: int = 1) -> None:
        others = set()
        for other, p in self.witnesses:
            if not is_friendly(g, p, r):
                raise ValueError(f"witness for {other} is not {r}-friendly")
            if p.block[self.subject] == p.block[other]:
                raise ValueError(f"witness for {other} does not split the pair")
            others.add(other)
        expected = set(range(g.n)) - {self.subject}
        if others != expected:
            missing = sorted(expected - others)
            raise ValueError(f"certificate misses vertices {missing}")


def _membership_codes(g: Digraph, cap: Optional[int]):
    """Per-vertex membership bit string across the canonical nontrivial
    friendly partitions, packed as a Python int per vertex.  Returns
    (codes, mask_lookup) where mask_lookup(i) gives the i-th partition's
    block-1 mask."""
    n = g.n
    if n >= _NUMPY_MIN_N:
        from .oracle import _resolve_cap

        if n > _resolve_cap(cap):
            raise CapExceeded(f"n={n} exceeds the exhaustive cap {_resolve_cap(cap)}")
        arr = _friendly_masks_numpy(g)
        codes = []
        for v in range(n):
            bits = ((arr >> np.uint32(v)) & np.uint32(1)).astype(np.uint8)
            packed = np.packbits(bits, bitorder="little").tobytes()
            codes.append(int.from_bytes(packed, "little"))
        return codes, lambda i: int(arr[i])
    masks = _friendly_block1_masks(g, 1, include_trivial=False, cap=cap)
    codes = [0] * n
    for i, m in enumerate(masks):
        bit = 1 << i
        mm = m
        while mm:
            low = mm & -mm
            codes[low.bit_length() - 1] |= bit
            mm ^= low
    return codes, lambda i: masks[i]


def find_separable_vertex(g: Digraph, cap: Optional[int] = None) -> Optional[tuple]:
    """A vertex separable from every other vertex, with a full certificate,
    or None when every class has size >= 2.

    Candidate order follows the structure that guarantees existence at high
    minimum out-degree: vertices on an intersecting cycle pair are tried
    first, then the rest in ascending order.
    """
    n = g.n
    if n == 0:
        return None
    codes, mask_at = _membership_codes(g, cap)

    order = list(range(n))
    triple = find_intersecting_pair_plus_disjoint(g)
    if triple is not None:
        pair_vertices = sorted(set(triple.cycles[0]) | set(triple.cycles[1]))
        rest = [v for v in range(n) if v not in set(pair_vertices)]
        order = pair_vertices + rest

    for u in order:
        cu = codes[u]
        if any(codes[w] == cu for w in range(n) if w != u):
            continue
        witnesses = []
        for w in range(n):
            if w == u:
                continue
            diff = cu ^ codes[w]
            idx = (diff & -diff).bit_length() - 1
            p = Partition.from_block1_mask(n, mask_at(idx))
            witnesses.append((w, p))
        cert = SeparationCertificate(subject=u, witnesses=tuple(witnesses))
        cert.validate(g)
        return u, cert
    return None


@dataclass(frozen=True)
class PeelStep:
    """One round of peeling: the certificate refers to `graph`, whose
    vertex i is original_ids[i] in the digraph the peeling started from."""

    original_vertex: VertexId
    local_vertex: VertexId
    graph: Digraph
    original_ids: tuple
    certificate: SeparationCertificate


@dataclass(frozen=True)
class PeelingResult:
    steps: tuple
    requested: int

    @property
    def count(self) -> int:
        return len(self.steps)

    def pairs(self) -> list:
        return [(s.original_vertex, s.certificate) for s in self.steps]


def find_k_separable_vertices(g: Digraph, k: int, cap: Optional[int] = None) -> PeelingResult:
    """Peel up to k separable vertices: find one, delete it, repeat on the
    remainder.  Stops early (partial result, no exception) when some round
    finds none."""
    if k < 1:
        raise ValueError("k must be at least 1")
    current = g
    ids = tuple(range(g.n))
    steps = []
    for _ in range(k):
        if current.n == 0:
            break
        found = find_separable_vertex(current, cap)
        if found is None:
            break
        v_local, cert = found
        steps.append(
            PeelStep(
                original_vertex=ids[v_local],
                local_vertex=v_local,
                graph=current,
                original_ids=ids,
                certificate=cert,
            )
        )
        before = min_out_degree(current)
        current, kept = current.delete_vertex(v_local)
        ids = tuple(ids[i] for i in kept)
        if current.n and min_out_degree(current) < before - 1:
            raise AssertionError("vertex deletion dropped the minimum out-degree by more than 1")
    return PeelingResult(steps=tuple(steps), requested=k)


# ---- gadgets ----

@dataclass(frozen=True)
class GadgetResult:
    """Extension of a digraph by gadget vertices.  original_map is the
    identity embedding of the old vertices; degree_preserved records whether
    the new vertices reach the original minimum out-degree."""

    extended: Digraph
    new_vertices: tuple
    original_map: tuple
    degree_preserved: bool


def attach_separator_cycle(g: Digraph, targets, s: int = 2) -> GadgetResult:
    """Append an s-cycle of new vertices, each also sending an edge to every
    target.  New-vertex out-degree 1 + len(targets); falling below the host's
    minimum out-degree is flagged (and logged), not an error."""
    targets = sorted(set(targets))
    if s < 2:
        raise ValueError("cycle length must be at least 2")
    if not targets:
        raise ValueError("target set must be nonempty")
    for t in targets:
        if not 0 <= t < g.n:
            raise ValueError(f"target {t} out of range")
    n = g.n
    rows = [list(row) for row in g.out_adj]
    for j in range(s):
        rows.append([n + (j + 1) % s] + targets)
    extended = Digraph(n + s, rows)
    preserved = g.n == 0 or 1 + len(targets) >= min_out_degree(g)
    if not preserved:
        log.warning(
            "separator-cycle vertices have out-degree %d, below the host minimum %d",
            1 + len(targets),
            min_out_degree(g),
        )
    return GadgetResult(
        extended=extended,
        new_vertices=tuple(range(n, n + s)),
        original_map=tuple(range(n)),
        degree_preserved=preserved,
    )


def attach_pendants(g: Digraph, targets, total_n: int) -> GadgetResult:
    """Pad with in-degree-0 vertices, each sending an edge to every target,
    until the digraph has total_n vertices.  Requires len(targets) at least
    the host minimum out-degree so the minimum is preserved."""
    targets = sorted(set(targets))
    if total_n < g.n:
        raise ValueError(f"total_n={total_n} is below the current order {g.n}")
    if not targets:
        raise ValueError("target set must be nonempty")
    for t in targets:
        if not 0 <= t < g.n:
            raise ValueError(f"target {t} out of range")
    if len(targets) < min_out_degree(g):
        raise ValueError(
            f"{len(targets)} targets would drop the minimum out-degree below {min_out_degree(g)}"
        )
    rows = [list(row) for row in g.out_adj]
    for _ in range(total_n - g.n):
        rows.append(list(targets))
    extended = Digraph(total_n, rows)
    return GadgetResult(
        extended=extended,
        new_vertices=tuple(range(g.n, total_n)),
        original_map=tuple(range(g.n)),
        degree_preserved=True,
    )


# ---- pair separation via vertex deletion (degree d+1 -> d lifting) ----

def separate_pair_via_deletion(
    g: Digraph, u: VertexId, v: VertexId, cap: Optional[int] = None
) -> Optional[Partition]:
    """Separate u from v by deleting u, separating u's out-neighborhood in
    the remainder, and reinstating u opposite v next to one of its
    out-neighbors.  Requires min out-degree >= 2.  None when the
    out-neighborhood cannot be separated."""
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("u and v must be distinct vertices of the digraph")
    if min_out_degree(g) < 2:
        raise ValueError("minimum out-degree must be at least 2")
    h, kept = g.delete_vertex(u)
    local = {orig: i for i, orig in enumerate(kept)}
    targets = sorted(local[x] for x in g.out_adj[u])
    if len(targets) < 2:
        raise ValueError(f"vertex {u} has fewer than 2 out-neighbors")
    sub = can_separate(h, targets, 1, cap)
    if sub is None:
        return None
    side = 1 - sub.block[local[v]]
    block = [0] * g.n
    for orig in range(g.n):
        block[orig] = side if orig == u else sub.block[local[orig]]
    p = Partition(tuple(block))
    if not is_friendly(g, p, 1) or p.block[u] == p.block[v]:
        raise AssertionError("reinstated partition failed validation")
    return p


# ---- reduction to strongly connected instances ----

@dataclass(frozen=True)
class SubInstance:
    graph: Digraph
    original_ids: tuple
    pair: tuple  # local vertex ids to separate


@dataclass(frozen=True)
class ReductionPlan:
    """Classification of a pair-separation instance over the condensation.

    Direct cases carry ready seed sets; sub-instance cases carry one smaller
    strongly connected instance plus the data needed to lift its separating
    partition back (path interiors, and for the cut case the separator
    vertex, its escape path to the sink union, and the sink union itself).
    Lifting always finishes with extend_friendly_sets.
    """

    graph: Digraph
    u: VertexId
    v: VertexId
    case: str
    sink_comps: tuple
    sub_instances: tuple = ()
    seed0: Optional[frozenset] = None
    seed1: Optional[frozenset] = None
    extra0: frozenset = frozenset()
    extra1: frozenset = frozenset()
    separator_vertex: Optional[VertexId] = None
    escape_path: tuple = ()
    sink_union: frozenset = frozenset()

    def lift(self, sub_partition: Optional[Partition] = None) -> Partition:
        g = self.graph
        if not self.sub_instances:
            if sub_partition is not None:
                raise ValueError(f"case {self.case} takes no sub-partition")
            p = extend_friendly_sets(g, self.seed0, self.seed1)
        else:
            if sub_partition is None:
                raise ValueError(f"case {self.case} needs a sub-partition")
            sub = self.sub_instances[0]
            a_loc, b_loc = sub.pair
            blocks = sub_partition.block
            if len(blocks) != sub.graph.n:
                raise ValueError("sub-partition size mismatch")
            if blocks[a_loc] == blocks[b_loc]:
                raise ValueError("sub-partition does not split the designated pair")
            side_a = blocks[a_loc]
            set_a = {sub.original_ids[i] for i in range(sub.graph.n) if blocks[i] == side_a}
            set_b = {sub.original_ids[i] for i in range(sub.graph.n) if blocks[i] != side_a}
            if self.case == "menger-cut":
                t = self.separator_vertex
                extra = set(self.escape_path) | set(self.sink_union)
                if t in set_a:
                    seed0, seed1 = set_a | extra, set_b
                else:
                    seed0, seed1 = set_a, set_b | extra
            else:
                seed0 = set_a | set(self.extra0)
                seed1 = set_b | set(self.extra1)
            p = extend_friendly_sets(g, seed0, seed1)
        if p.block[self.u] == p.block[self.v]:
            raise AssertionError("lifted partition does not separate the pair")
        return p


def reduce_to_strongly_connected(g: Digraph, u: VertexId, v: VertexId) -> ReductionPlan:
    """Classify the instance (separate u from v, min out-degree >= 3) over
    the sink components of the condensation, producing either direct seed
    sets or one strongly connected sub-instance plus a lifting recipe."""
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError("u and v must be distinct vertices of the digraph")
    d = min_out_degree(g)
    if d < 3:
        raise ValueError("minimum out-degree must be at least 3")

    comps = strongly_connected_components(g)
    comp_of = [0] * g.n
    for i, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = i
    is_sink = [True] * len(comps)
    for x, h in g.edges():
        if comp_of[x] != comp_of[h]:
            is_sink[comp_of[x]] = False
    sink_ids = {i for i in range(len(comps)) if is_sink[i]}
    sink_comps = tuple(comps[i] for i in sorted(sink_ids))
    S = set()
    for comp in sink_comps:
        S.update(comp)

    common = dict(graph=g, u=u, v=v, sink_comps=sink_comps)

    u_in, v_in = comp_of[u] in sink_ids, comp_of[v] in sink_ids
    if u_in and v_in:
        if comp_of[u] != comp_of[v]:
            return ReductionPlan(
                case="sinks-distinct",
                seed0=frozenset(comps[comp_of[u]]),
                seed1=frozenset(comps[comp_of[v]]),
                **common,
            )
        comp = comps[comp_of[u]]
        sub_g, ids = g.induced(comp)
        local = {orig: i for i, orig in enumerate(ids)}
        return ReductionPlan(
            case="sinks-shared",
            sub_instances=(SubInstance(sub_g, ids, (local[u], local[v])),),
            **common,
        )

    if u_in != v_in:
        above, below = (v, u) if u_in else (u, v)
        entries = _first_entries(g, above, S)
        below_comp = comp_of[below]
        for w, path in entries:
            if comp_of[w] != below_comp:
                return ReductionPlan(
                    case="entry-distinct",
                    seed0=frozenset(comps[comp_of[w]]) | frozenset(path[:-1]),
                    seed1=frozenset(comps[below_comp]),
                    **common,
                )
        for w, path in entries:
            if w != below:
                comp = comps[below_comp]
                sub_g, ids = g.induced(comp)
                local = {orig: i for i, orig in enumerate(ids)}
                return ReductionPlan(
                    case="entry-shared",
                    sub_instances=(SubInstance(sub_g, ids, (local[w], local[below])),),
                    extra0=frozenset(path[:-1]),
                    **common,
                )
        # the only way from `above` into the sink union is through `below`
        reach_above = _reachable_avoiding(g, above, S)
        return ReductionPlan(
            case="single-entry",
            seed0=frozenset(reach_above),
            seed1=frozenset(S),
            **common,
        )

    # both above the sink union
    paths, sep = vertex_disjoint_paths_and_separator(g, [u, v], sorted(S))
    if len(paths) >= 2:
        trimmed = {}
        for path in paths:
            cut = next(i for i, x in enumerate(path) if x in S)
            trimmed[path[0]] = path[: cut + 1]
        pu, pv = trimmed[u], trimmed[v]
        su, sv = pu[-1], pv[-1]
        if comp_of[su] != comp_of[sv]:
            return ReductionPlan(
                case="paths-distinct",
                seed0=frozenset(comps[comp_of[su]]) | frozenset(pu[:-1]),
                seed1=frozenset(comps[comp_of[sv]]) | frozenset(pv[:-1]),
                **common,
            )
        comp = comps[comp_of[su]]
        sub_g, ids = g.induced(comp)
        local = {orig: i for i, orig in enumerate(ids)}
        return ReductionPlan(
            case="paths-shared",
            sub_instances=(SubInstance(sub_g, ids, (local[su], local[sv])),),
            extra0=frozenset(pu[:-1]),
            extra1=frozenset(pv[:-1]),
            **common,
        )

    if len(paths) == 0:
        raise AssertionError("every vertex reaches the sink union")
    t = sep[0]

    # rewire t to funnel back into {u, v}
    rows = [list(row) for row in g.out_adj]
    if t == u:
        picks = [h for h in g.out_adj[v] if h != u][: d - 1]
        rows[t] = [v] + picks
    elif t == v:
        picks = [h for h in g.out_adj[u] if h != v][: d - 1]
        rows[t] = [u] + picks
    else:
        picks = []
        for h in list(g.out_adj[u]) + list(g.out_adj[v]):
            if h not in (t, u, v) and h not in picks:
                picks.append(h)
            if len(picks) == d - 2:
                break
        rows[t] = [u, v] + picks
    g_prime = Digraph(g.n, rows)

    region = _reachable_from(g_prime, (u, v))
    if t not in region:
        raise AssertionError("separator vertex escaped the rewired region")
    sub_g, ids = g_prime.induced(region)
    local = {orig: i for i, orig in enumerate(ids)}
    if min_out_degree(sub_g) < d:
        raise AssertionError("rewired sub-instance lost out-degree")
    if len(strongly_connected_components(sub_g)) != 1:
        raise AssertionError("rewired sub-instance is not strongly connected")

    if t in S:
        rho = (t,)
    else:
        rho = _shortest_path_into(g, t, S)
        if set(rho[1:]) & region:
            raise AssertionError("escape path re-enters the rewired region")
    return ReductionPlan(
        case="menger-cut",
        sub_instances=(SubInstance(sub_g, ids, (local[u], local[v])),),
        separator_vertex=t,
        escape_path=rho,
        sink_union=frozenset(S),
        **common,
    )


def _first_entries(g: Digraph, start: VertexId, S: set) -> list:
    """BFS from start through the complement of S; every edge into S found
    on the way is recorded once per entry vertex, with its access path."""
    parent = {start: None}
    queue = [start]
    qi = 0
    entries = []
    seen_entries = set()
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for h in g.out_adj[x]:
            if h in S:
                if h not in seen_entries:
                    seen_entries.add(h)
                    path = [h]
                    node = x
                    while node is not None:
                        path.append(node)
                        node = parent[node]
                    path.reverse()
                    entries.append((h, tuple(path)))
            elif h not in parent:
                parent[h] = x
                queue.append(h)
    return entries


def _reachable_avoiding(g: Digraph, start: VertexId, avoid: set) -> set:
    seen = {start}
    queue = [start]
    while queue:
        x = queue.pop()
        for h in g.out_adj[x]:
            if h not in avoid and h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def _reachable_from(g: Digraph, starts) -> set:
    seen = set(starts)
    queue = list(starts)
    while queue:
        x = queue.pop()
        for h in g.out_adj[x]:
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return seen


def _shortest_path_into(g: Digraph, start: VertexId, S: set) -> tuple:
    parent = {start: None}
    queue = [start]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for h in g.out_adj[x]:
            if h in parent:
                continue
            parent[h] = x
            if h in S:
                path = [h]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                return tuple(path)
            queue.append(h)
    raise AssertionError("sink union unreachable")


def separate_via_reduction(
    g: Digraph, u: VertexId, v: VertexId, cap: Optional[int] = None
) -> Optional[Partition]:
    """Full pipeline: plan the reduction, solve the sub-instance with the
    exhaustive oracle when there is one, and lift."""
    plan = reduce_to_strongly_connected(g, u, v)
    if plan.sub_instances:
        sub = plan.sub_instances[0]
        sp = can_separate(sub.graph, sub.pair, 1, cap)
        if sp is None:
            return None
        return plan.lift(sp)
    return plan.lift()


# ---- counterexample scanning ----

@dataclass(frozen=True)
class ScanHit:
    n: int
    source: str  # "exhaustive" or "sample"
    index: int
    edge_list: str
    detail: dict


@dataclass(frozen=True)
class ScanReport:
    d: int
    r: int
    mode: str
    threshold: int
    n_values: tuple
    seed: int
    samples: int
    scanned: dict
    exhaustive: dict
    hits: tuple

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "r": self.r,
            "mode": self.mode,
            "threshold": self.threshold,
            "n_values": list(self.n_values),
            "seed": self.seed,
            "samples": self.samples,
            "scanned": {str(k): v for k, v in self.scanned.items()},
            "exhaustive": {str(k): v for k, v in self.exhaustive.items()},
            "hits": [
                {
                    "n": h.n,
                    "source": h.source,
                    "index": h.index,
                    "edge_list": h.edge_list,
                    "detail": h.detail,
                }
                for h in self.hits
            ],
        }


SCAN_MODES = ("pair-separability", "partition-count")
_EXHAUSTIVE_LIMIT = 300_000


def _examine(g: Digraph, r: int, mode: str, threshold: int) -> Optional[dict]:
    if mode == "pair-separability":
        rep = separation_report(g, r)
        for cls in rep.classes:
            if len(cls) >= 2:
                return {
                    "class_sizes": [len(c) for c in rep.classes],
                    "inseparable_pair": [cls[0], cls[1]],
                }
        return None
    count = len(_friendly_block1_masks(g, r, include_trivial=True))
    if count < threshold:
        return {"partition_count_with_trivial": count}
    return None


def sample_d_out_digraph(n: int, d: int, rng: random.Random) -> Digraph:
    """Uniform random digraph with every out-degree exactly d."""
    if d > n - 1:
        raise ValueError(f"out-degree {d} infeasible on {n} vertices")
    rows = []
    for v in range(n):
        others = [w for w in range(n) if w != v]
        rows.append(sorted(rng.sample(others, d)))
    return Digraph.from_out_lists(n, rows)


def _scan_shard(args) -> list:
    d, r, n, mode, threshold, seed, source, start, stop = args
    from .io import serialize_edge_list

    out = []
    if source == "exhaustive":
        gen = iter_out_degree_exact_digraphs(n, d)
        for idx, g in enumerate(gen):
            if idx >= stop:
                break
            if idx < start:
                continue
            detail = _examine(g, r, mode, threshold)
            if detail is not None:
                out.append((idx, serialize_edge_list(g), detail))
    else:
        for idx in range(start, stop):
            rng = random.Random(f"{seed}:{n}:{idx}")
            g = sample_d_out_digraph(n, d, rng)
            detail = _examine(g, r, mode, threshold)
            if detail is not None:
                out.append((idx, serialize_edge_list(g), detail))
    return out


def scan_for_counterexamples(
    d: int,
    r: int,
    n_range,
    mode: str,
    threshold: int = 2,
    seed: int = 0,
    samples: int = 200,
    workers: int = 1,
) -> ScanReport:
    """Sweep digraphs with all out-degrees exactly d looking for structures
    that would contradict the separation theorems: mode "pair-separability"
    flags graphs with an inseparable pair, mode "partition-count" flags
    graphs with fewer than `threshold` friendly partitions (trivial
    included).  Exhaustive when the space is small, seeded sampling
    otherwise; every hit carries a replayable edge list."""
    if mode not in SCAN_MODES:
        raise ValueError(f"mode must be one of {SCAN_MODES}")
    n_values = tuple(n_range)
    scanned = {}
    exhaustive = {}
    hits = []
    for n in n_values:
        space = count_out_degree_exact_digraphs(n, d)
        if space <= _EXHAUSTIVE_LIMIT:
            exhaustive[n] = True
            total = space
            source = "exhaustive"
        else:
            exhaustive[n] = False
            total = samples
            source = "sample"
        scanned[n] = total
        shards = []
        if workers <= 1:
            shards.append(_scan_shard((d, r, n, mode, threshold, seed, source, 0, total)))
        else:
            step = -(-total // workers)
            bounds = [(i, min(i + step, total)) for i in range(0, total, step)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                shards = list(
                    pool.map(
                        _scan_shard,
                        [(d, r, n, mode, threshold, seed, source, a, b) for a, b in bounds],
                    )
                )
        for shard in shards:
            for idx, edge_list, detail in shard:
                hits.append(ScanHit(n=n, source=source, index=idx, edge_list=edge_list, detail=detail))
    return ScanReport(
        d=d,
        r=r,
        mode=mode,
        threshold=threshold,
        n_values=n_values,
        seed=seed,
        samples=samples,
        scanned=scanned,
        exhaustive=exhaustive,
        hits=tuple(hits),
    )
