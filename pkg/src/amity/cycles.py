"""Domination, contraction, compression, and cycle packing.

Compression repeatedly contracts edges that are neither dominated nor on a
2-cycle; it preserves the minimum out-degree exactly, which is what makes
it useful before searching for disjoint cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .digraph import (
    CycleSet,
    Digraph,
    Partition,
    RELATION_ALL_DISJOINT,
    RELATION_FIRST_TWO_INTERSECT,
    VertexId,
    find_cycle,
    min_out_degree,
    verify_cycle_set,
)

# Degree guarantees for cycle packing: min out-degree 3 forces two disjoint
# cycles, 15 forces three.  The true threshold for three is conjectured to
# be 5; keep it as data so an improved bound is a one-line change.
THREE_DISJOINT_CYCLE_DEGREE = 15
DISJOINT_CYCLE_DEGREE_GUARANTEE = {2: 3, 3: THREE_DISJOINT_CYCLE_DEGREE}


@dataclass(frozen=True)
class ContractionTrace:
    """Record of a contraction sequence.

    merges: ordered (deleted_vertex, absorbed_into) pairs in original ids;
    replaying them on the original digraph reproduces the compressed one.
    final_map: original vertex -> compressed vertex.
    roots: compressed vertex -> the original vertex that survived as it.
    """

    original_n: int
    merges: tuple
    final_map: tuple
    roots: tuple

    @property
    def compressed_n(self) -> int:
        return len(self.roots)

    def preimages(self) -> list:
        """Original vertices absorbed into each compressed vertex."""
        groups = [[] for _ in range(self.compressed_n)]
        for v, c in enumerate(self.final_map):
            groups[c].append(v)
        return groups


class _MutableDigraph:
    """Working copy supporting edge contraction; shared by compress and the
    matching-contraction surgery."""

    def __init__(self, g: Digraph):
        self.n = g.n
        self.out = [list(row) for row in g.out_adj]
        self.out_mask = list(g.out_masks)
        self.in_mask = list(g.in_masks)
        self.alive = [True] * g.n
        self.parent = list(range(g.n))
        self.merges = []

    def contract(self, u: VertexId, v: VertexId) -> None:
        """Absorb u into v: delete u's out-edges, redirect u's in-edges to v
        (deduplicating, dropping a would-be self-loop), remove u."""
        bit_u = 1 << u
        for h in self.out[u]:
            self.in_mask[h] &= ~bit_u
        in_u = self.in_mask[u]
        w_bits = in_u
        while w_bits:
            low = w_bits & -w_bits
            w = low.bit_length() - 1
            w_bits ^= low
            row = self.out[w]
            i = row.index(u)
            if w == v or self.out_mask[w] >> v & 1:
                del row[i]
                self.out_mask[w] &= ~bit_u
            else:
                row[i] = v
                self.out_mask[w] = (self.out_mask[w] & ~bit_u) | (1 << v)
        self.in_mask[v] |= in_u & ~(1 << v)
        self.out[u] = []
        self.out_mask[u] = 0
        self.in_mask[u] = 0
        self.alive[u] = False
        self.parent[u] = v
        self.merges.append((u, v))

    def finalize(self) -> tuple:
        survivors = [v for v in range(self.n) if self.alive[v]]
        compact = {v: i for i, v in enumerate(survivors)}

        def find(x):
            while self.parent[x] != x:
                x = self.parent[x]
            return x

        final_map = tuple(compact[find(v)] for v in range(self.n))
        rows = [[compact[h] for h in self.out[v]] for v in survivors]
        g = Digraph.from_out_lists(len(survivors), rows)
        trace = ContractionTrace(
            original_n=self.n,
            merges=tuple(self.merges),
            final_map=final_map,
            roots=tuple(survivors),
        )
        return g, trace


def is_dominated(g: Digraph, u: VertexId, v: VertexId) -> bool:
    """True when some vertex sends edges to both endpoints of the edge
    u->v.  Raises ValueError if u->v is not an edge."""
    if not (0 <= u < g.n and 0 <= v < g.n and g.has_edge(u, v)):
        raise ValueError(f"{u}->{v} is not an edge")
    return bool(g.in_masks[u] & g.in_masks[v])


def _first_contractible(m: _MutableDigraph) -> Optional[tuple]:
    for u in range(m.n):
        if not m.alive[u]:
            continue
        for v in m.out[u]:
            if m.out_mask[v] >> u & 1:
                continue  # 2-cycle
            if m.in_mask[u] & m.in_mask[v]:
                continue  # dominated
            return (u, v)
    return None


def compress(g: Digraph) -> tuple:
    """Contract edges that are neither dominated nor on a 2-cycle until none
    remain.  Deterministic: edges are scanned in (source, position) order and
    the first eligible one is contracted.  Returns (compressed, trace).

    Preserves the minimum out-degree exactly: a contraction never deduplicates
    (a would-be duplicate witness would dominate the contracted edge).
    """
    m = _MutableDigraph(g)
    while True:
        edge = _first_contractible(m)
        if edge is None:
            break
        m.contract(*edge)
    out, trace = m.finalize()
    if g.n and min_out_degree(out) != min_out_degree(g):
        raise AssertionError("compression changed the minimum out-degree")
    return out, trace


def decompress_partition(trace: ContractionTrace, p: Partition) -> Partition:
    """Pull a partition of the compressed digraph back to the original."""
    if p.n != trace.compressed_n:
        raise ValueError(
            f"partition has {p.n} vertices, compressed digraph has {trace.compressed_n}"
        )
    return Partition(tuple(p.block[trace.final_map[v]] for v in range(trace.original_n)))


def in_neighborhood_cycle(g: Digraph, v: VertexId) -> tuple:
    """A cycle among the in-neighbors of v.

    Requires that g is compressed and v is not on a 2-cycle; under those
    conditions such a cycle always exists.  Errors name the offending edge
    or 2-cycle when a precondition fails.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    for w in g.out_adj[v]:
        if g.has_edge(w, v):
            raise ValueError(f"vertex {v} is on a 2-cycle with {w}")
    m = _MutableDigraph(g)
    edge = _first_contractible(m)
    if edge is not None:
        raise ValueError(f"digraph is not compressed: edge {edge[0]}->{edge[1]} is contractible")
    cyc = find_cycle(g, within=g.in_adj[v])
    if cyc is None:
        raise AssertionError(f"no cycle among in-neighbors of {v} despite compressed input")
    return cyc


# ---- cycle enumeration (increasing length, deterministic) ----

def iter_cycles(g: Digraph, allowed: Optional[int] = None, max_len: Optional[int] = None) -> Iterator[tuple]:
    """All simple directed cycles with vertices in the `allowed` bitmask,
    ordered by length and then by canonical form (cycle starts at its
    smallest vertex; DFS follows adjacency order)."""
    if allowed is None:
        allowed = (1 << g.n) - 1
    verts = [v for v in range(g.n) if allowed >> v & 1]
    if max_len is None:
        max_len = len(verts)
    for length in range(2, max_len + 1):
        for s in verts:
            # cycles whose smallest vertex is s
            path = [s]
            on_path = 1 << s
            iters = [iter(g.out_adj[s])]
            while path:
                v = path[-1]
                advanced = False
                for w in iters[-1]:
                    if w <= s or not (allowed >> w & 1) or (on_path >> w & 1):
                        if w == s and len(path) == length:
                            yield tuple(path)
                        continue
                    if len(path) < length:
                        path.append(w)
                        on_path |= 1 << w
                        iters.append(iter(g.out_adj[w]))
                        advanced = True
                        break
                if not advanced:
                    on_path &= ~(1 << path.pop())
                    iters.pop()


def _shortest_cycle(g: Digraph, allowed: int, banned_edges: Optional[set] = None) -> Optional[tuple]:
    """Shortest cycle inside the allowed set, BFS per start vertex.
    Deterministic tie-break: smallest start vertex, then smallest closing
    in-neighbor."""
    best = None
    for s in range(g.n):
        if not (allowed >> s & 1):
            continue
        dist = {s: 0}
        parent = {}
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            if best is not None and dist[v] + 1 >= best[0]:
                continue
            for w in g.out_adj[v]:
                if not (allowed >> w & 1) or w in dist:
                    continue
                if banned_edges and (v, w) in banned_edges:
                    continue
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
        close = None
        for w in g.in_adj[s]:
            if w not in dist or (banned_edges and (w, s) in banned_edges):
                continue
            if w == s:
                continue
            length = dist[w] + 1
            if length >= 2 and (close is None or (length, w) < close):
                close = (length, w)
        if close is not None and (best is None or close[0] < best[0]):
            w = close[1]
            path = [w]
            while path[-1] != s:
                path.append(parent[path[-1]])
            path.reverse()
            best = (close[0], tuple(path))
    return best[1] if best else None


# ---- disjoint cycle packing ----

def _search_disjoint(g: Digraph, k: int, avail: int) -> Optional[list]:
    if k == 0:
        return []
    if avail.bit_count() < 2 * k:
        return None
    for cyc in iter_cycles(g, allowed=avail):
        mask = 0
        for v in cyc:
            mask |= 1 << v
        rest = _search_disjoint(g, k - 1, avail & ~mask)
        if rest is not None:
            return [cyc] + rest
    return None


def _lift_cycles(g: Digraph, trace: ContractionTrace, comp_cycles: list) -> list:
    """Map cycles of the compressed digraph back to cycles of g.  Each
    compressed vertex expands to its surviving root plus a path through its
    preimage; disjointness and intersections are preserved."""
    groups = trace.preimages()
    group_mask = [0] * trace.compressed_n
    for c, grp in enumerate(groups):
        for v in grp:
            group_mask[c] |= 1 << v

    def path_within(start: VertexId, goal: VertexId, mask: int) -> list:
        if start == goal:
            return [start]
        parent = {start: None}
        queue = [start]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            for w in g.out_adj[v]:
                if not (mask >> w & 1) or w in parent:
                    continue
                parent[w] = v
                if w == goal:
                    path = [w]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(w)
        raise AssertionError("contraction trace lost a preimage path")

    lifted = []
    for cyc in comp_cycles:
        out = []
        m = len(cyc)
        for i in range(m):
            c, c_next = cyc[i], cyc[(i + 1) % m]
            r = trace.roots[c]
            entry = None
            for y in g.out_adj[r]:
                if trace.final_map[y] == c_next:
                    entry = y
                    break
            if entry is None:
                raise AssertionError("compressed edge without an original witness")
            seg = path_within(entry, trace.roots[c_next], group_mask[c_next])
            out.append(r)
            out.extend(seg[:-1])
        lifted.append(tuple(out))
    return lifted


def find_disjoint_cycles(g: Digraph, k: int) -> Optional[CycleSet]:
    """k pairwise vertex-disjoint cycles (k in {2, 3}), or None when no such
    family exists.

    Compresses first and searches the compressed digraph, lifting any find
    back through the trace; when the compressed search comes up empty and
    contraction actually happened, falls back to an exhaustive search on the
    original digraph (contraction can destroy a packing when the minimum
    out-degree is below 2).  Guaranteed present at min out-degree 3 (k=2)
    and 15 (k=3); see DISJOINT_CYCLE_DEGREE_GUARANTEE.
    """
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    if g.n == 0:
        return None
    comp, trace = compress(g)
    found = _search_disjoint(comp, k, (1 << comp.n) - 1)
    if found is not None:
        cycles = _lift_cycles(g, trace, found)
    elif trace.merges:
        cycles = _search_disjoint(g, k, (1 << g.n) - 1)
    else:
        cycles = None
    if cycles is None:
        return None
    cs = CycleSet(tuple(cycles), RELATION_ALL_DISJOINT)
    verify_cycle_set(g, cs)
    return cs


# ---- intersecting cycle structures ----

def _maximal_disjoint_family(g: Digraph) -> list:
    family = []
    avail = (1 << g.n) - 1
    while True:
        cyc = _shortest_cycle(g, avail)
        if cyc is None:
            return family
        family.append(cyc)
        for v in cyc:
            avail &= ~(1 << v)


def _stream_intersecting_pairs(g: Digraph) -> Iterator[tuple]:
    seen = []
    for cyc in iter_cycles(g):
        cset = set(cyc)
        for prev in seen:
            if cset & prev[1]:
                yield prev[0], cyc
        seen.append((cyc, cset))


def find_two_intersecting_cycles(g: Digraph) -> Optional[CycleSet]:
    """Two distinct cycles sharing at least one vertex, or None if no such
    pair exists.  Guaranteed present when min out-degree is at least 2.

    Proof-shaped fast path: build a maximal disjoint cycle family, delete its
    edges, find a cycle in the remainder (it must hit the family).  That path
    is only complete at min out-degree 2, so on failure below that degree an
    exhaustive pair search finishes the job.
    """
    family = _maximal_disjoint_family(g)
    if family:
        banned = set()
        for cyc in family:
            for i, v in enumerate(cyc):
                banned.add((v, cyc[(i + 1) % len(cyc)]))
        other = _shortest_cycle(g, (1 << g.n) - 1, banned_edges=banned)
        if other is not None:
            oset = set(other)
            for cyc in family:
                if oset & set(cyc):
                    cs = CycleSet((cyc, other), RELATION_FIRST_TWO_INTERSECT)
                    verify_cycle_set(g, cs)
                    return cs
            raise AssertionError("cycle avoiding a maximal family's vertices")
        if min_out_degree(g) >= 2:
            raise AssertionError("no remainder cycle despite min out-degree 2")
    for c1, c2 in _stream_intersecting_pairs(g):
        cs = CycleSet((c1, c2), RELATION_FIRST_TWO_INTERSECT)
        verify_cycle_set(g, cs)
        return cs
    return None


def find_intersecting_pair_plus_disjoint(g: Digraph) -> Optional[CycleSet]:
    """Two intersecting cycles plus a third cycle disjoint from both, or
    None when no such triple exists.  Guaranteed present when min out-degree
    is at least THREE_DISJOINT_CYCLE_DEGREE.

    Fast path reuses the intersecting-pair search and looks for the third
    cycle outside it; completeness comes from an exhaustive scan over
    intersecting pairs.
    """
    pair = find_two_intersecting_cycles(g)
    if pair is None:
        return None
    full = (1 << g.n) - 1
    mask = 0
    for cyc in pair.cycles:
        for v in cyc:
            mask |= 1 << v
    third = _shortest_cycle(g, full & ~mask)
    if third is not None:
        cs = CycleSet((pair.cycles[0], pair.cycles[1], third), RELATION_FIRST_TWO_INTERSECT)
        verify_cycle_set(g, cs)
        return cs
    for c1, c2 in _stream_intersecting_pairs(g):
        used = 0
        for v in c1:
            used |= 1 << v
        for v in c2:
            used |= 1 << v
        c3 = _shortest_cycle(g, full & ~used)
        if c3 is not None:
            cs = CycleSet((c1, c2, c3), RELATION_FIRST_TWO_INTERSECT)
            verify_cycle_set(g, cs)
            return cs
    return None
