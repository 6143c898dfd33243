"""Core digraph types and basic structure algorithms.

Vertices are dense integers 0..n-1.  Edges are directed.  Self-loops and
parallel edges are rejected at construction; 2-cycles (u->v together with
v->u) are allowed.  All types are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

VertexId = int


class Digraph:
    """Immutable digraph given by ordered out-adjacency lists.

    The per-vertex adjacency order is preserved exactly as given; several
    operations (serialization, deterministic searches) rely on it.
    """

    __slots__ = ("n", "out_adj", "_in_adj", "_out_masks", "_in_masks")

    def __init__(self, n: int, out_adj: Sequence[Sequence[VertexId]], _validate: bool = True):
        if _validate:
            if n < 0:
                raise ValueError("vertex count must be nonnegative")
            if len(out_adj) != n:
                raise ValueError(f"expected {n} adjacency lists, got {len(out_adj)}")
        adj = tuple(tuple(row) for row in out_adj)
        if _validate:
            for v, row in enumerate(adj):
                seen = set()
                for h in row:
                    if not 0 <= h < n:
                        raise ValueError(f"vertex {v}: out-neighbor {h} out of range")
                    if h == v:
                        raise ValueError(f"vertex {v}: self-loop")
                    if h in seen:
                        raise ValueError(f"vertex {v}: duplicate edge to {h}")
                    seen.add(h)
        self.n = n
        self.out_adj = adj
        self._in_adj = None
        self._out_masks = None
        self._in_masks = None

    @classmethod
    def from_out_lists(cls, n: int, out_adj: Sequence[Sequence[VertexId]]) -> "Digraph":
        """Trusted constructor skipping validation (internal generators)."""
        return cls(n, out_adj, _validate=False)

    # ---- derived structure, computed lazily ----

    @property
    def in_adj(self) -> tuple:
        if self._in_adj is None:
            rows = [[] for _ in range(self.n)]
            for v, row in enumerate(self.out_adj):
                for h in row:
                    rows[h].append(v)
            self._in_adj = tuple(tuple(r) for r in rows)
        return self._in_adj

    @property
    def out_masks(self) -> tuple:
        if self._out_masks is None:
            self._out_masks = tuple(
                sum(1 << h for h in row) for row in self.out_adj
            )
        return self._out_masks

    @property
    def in_masks(self) -> tuple:
        if self._in_masks is None:
            masks = [0] * self.n
            for v, row in enumerate(self.out_adj):
                bit = 1 << v
                for h in row:
                    masks[h] |= bit
            self._in_masks = tuple(masks)
        return self._in_masks

    # ---- queries ----

    def out_degree(self, v: VertexId) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: VertexId) -> int:
        return len(self.in_adj[v])

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return bool(self.out_masks[u] >> v & 1)

    def edge_count(self) -> int:
        return sum(len(row) for row in self.out_adj)

    def edges(self) -> Iterator[tuple]:
        """Edges in (source, adjacency position) order."""
        for v, row in enumerate(self.out_adj):
            for h in row:
                yield (v, h)

    def induced(self, keep: Iterable[VertexId]) -> tuple:
        """Induced subgraph on `keep`.

        Returns (subgraph, original_ids) where original_ids[i] is the vertex
        of self that became vertex i.  Kept vertices are renumbered in
        ascending order; adjacency order is inherited.
        """
        ids = sorted(set(keep))
        local = {v: i for i, v in enumerate(ids)}
        rows = [
            [local[h] for h in self.out_adj[v] if h in local]
            for v in ids
        ]
        return Digraph.from_out_lists(len(ids), rows), tuple(ids)

    def delete_vertex(self, v: VertexId) -> tuple:
        return self.induced([u for u in range(self.n) if u != v])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Digraph)
            and self.n == other.n
            and self.out_adj == other.out_adj
        )

    def __hash__(self) -> int:
        return hash((self.n, self.out_adj))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.edge_count()})"


class Partition:
    """A 2-block partition: block[v] is 0 or 1 for every vertex."""

    __slots__ = ("block",)

    def __init__(self, block: Sequence[int]):
        b = tuple(block)
        for v, s in enumerate(b):
            if s not in (0, 1):
                raise ValueError(f"vertex {v}: block must be 0 or 1, got {s!r}")
        self.block = b

    @classmethod
    def from_block1_mask(cls, n: int, mask: int) -> "Partition":
        p = cls.__new__(cls)
        p.block = tuple((mask >> v) & 1 for v in range(n))
        return p

    @property
    def n(self) -> int:
        return len(self.block)

    def block_vertices(self, which: int) -> tuple:
        return tuple(v for v, s in enumerate(self.block) if s == which)

    def block1_mask(self) -> int:
        m = 0
        for v, s in enumerate(self.block):
            if s:
                m |= 1 << v
        return m

    def is_trivial(self) -> bool:
        """True when one block is empty."""
        return all(s == 0 for s in self.block) or all(s == 1 for s in self.block)

    def swapped(self) -> "Partition":
        return Partition(tuple(1 - s for s in self.block))

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.block == other.block

    def __hash__(self) -> int:
        return hash(self.block)

    def __repr__(self) -> str:
        return "Partition(%s)" % "".join(map(str, self.block))


RELATION_ALL_DISJOINT = "all-disjoint"
RELATION_FIRST_TWO_INTERSECT = "first-two-intersect-third-disjoint"


@dataclass(frozen=True)
class CycleSet:
    """A list of directed simple cycles plus the claimed vertex relation.

    relation is one of RELATION_ALL_DISJOINT (pairwise vertex-disjoint) or
    RELATION_FIRST_TWO_INTERSECT (cycles[0] and cycles[1] share at least one
    vertex; any further cycle is disjoint from both).  Use verify_cycle_set
    to check the claim against a digraph.
    """

    cycles: tuple
    relation: str

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(tuple(c) for c in self.cycles))
        if self.relation not in (RELATION_ALL_DISJOINT, RELATION_FIRST_TWO_INTERSECT):
            raise ValueError(f"unknown relation {self.relation!r}")


def verify_cycle_set(g: Digraph, cs: CycleSet) -> None:
    """Raise ValueError unless every cycle is a simple directed cycle of g
    and the claimed relation matches the actual vertex sets."""
    sets = []
    for idx, cyc in enumerate(cs.cycles):
        if len(cyc) < 2:
            raise ValueError(f"cycle {idx}: length {len(cyc)} below 2")
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"cycle {idx}: repeated vertex")
        for i, v in enumerate(cyc):
            w = cyc[(i + 1) % len(cyc)]
            if not (0 <= v < g.n) or not g.has_edge(v, w):
                raise ValueError(f"cycle {idx}: missing edge {v}->{w}")
        sets.append(set(cyc))
    if cs.relation == RELATION_ALL_DISJOINT:
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if sets[i] & sets[j]:
                    raise ValueError(f"cycles {i} and {j} share vertices but claim disjoint")
    else:
        if len(sets) < 2:
            raise ValueError("relation needs at least two cycles")
        if not (sets[0] & sets[1]):
            raise ValueError("cycles 0 and 1 claim to intersect but are disjoint")
        for j in range(2, len(sets)):
            if sets[j] & (sets[0] | sets[1]):
                raise ValueError(f"cycle {j} claims disjoint from the intersecting pair")


# ---- degree summaries ----

def min_out_degree(g: Digraph) -> int:
    if g.n == 0:
        return 0
    return min(len(row) for row in g.out_adj)


def max_in_degree(g: Digraph) -> int:
    if g.n == 0:
        return 0
    return max(len(row) for row in g.in_adj)


# ---- strongly connected components (iterative Tarjan) ----

def strongly_connected_components(g: Digraph) -> list:
    """SCCs as sorted vertex tuples, in topological order of the
    condensation: components with no outgoing condensation edges (sinks)
    come last."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            row = g.out_adj[v]
            while pi < len(row):
                w = row[pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(tuple(sorted(comp)))
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    # Tarjan emits a component only after everything it reaches, i.e. sinks
    # first; reverse so sinks come last.
    comps.reverse()
    return comps


def sink_components(g: Digraph) -> list:
    """Components of the condensation with no outgoing edges."""
    comps = strongly_connected_components(g)
    comp_of = [0] * g.n
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    is_sink = [True] * len(comps)
    for v, h in g.edges():
        if comp_of[v] != comp_of[h]:
            is_sink[comp_of[v]] = False
    return [comp for i, comp in enumerate(comps) if is_sink[i]]


# ---- cycle detection ----

def find_cycle(g: Digraph, within: Optional[Iterable[VertexId]] = None) -> Optional[tuple]:
    """A directed simple cycle in the subgraph induced by `within` (default:
    all vertices), or None if that subgraph is acyclic.

    Deterministic: DFS from vertices in ascending order following adjacency
    order.  Always succeeds when the induced subgraph has min out-degree
    at least 1.
    """
    if within is None:
        allowed = None
    else:
        allowed = set(within)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}

    def ok(v):
        return allowed is None or v in allowed

    for root in range(g.n):
        if not ok(root) or color.get(root, WHITE) != WHITE:
            continue
        path = [root]
        iters = [iter(g.out_adj[root])]
        color[root] = GRAY
        while path:
            v = path[-1]
            found_next = False
            for w in iters[-1]:
                if not ok(w):
                    continue
                c = color.get(w, WHITE)
                if c == GRAY:
                    i = path.index(w)
                    return tuple(path[i:])
                if c == WHITE:
                    color[w] = GRAY
                    path.append(w)
                    iters.append(iter(g.out_adj[w]))
                    found_next = True
                    break
            if not found_next:
                color[v] = BLACK
                path.pop()
                iters.pop()
    return None


# ---- Menger: vertex-disjoint paths and a matching separator ----

@dataclass
class _FlowNet:
    nodes: int
    adj: list = field(default_factory=list)
    cap: dict = field(default_factory=dict)

    def add(self, a, b, c):
        if (a, b) not in self.cap:
            self.adj[a].append(b)
            self.adj[b].append(a)
            self.cap[(a, b)] = 0
            self.cap[(b, a)] = 0
        self.cap[(a, b)] += c


def vertex_disjoint_paths_and_separator(
    g: Digraph, sources: Iterable[VertexId], targets: Iterable[VertexId]
) -> tuple:
    """Maximum family of vertex-disjoint source-to-target paths, plus a
    separator of equal size meeting each path exactly once.

    Paths are fully vertex-disjoint (unit vertex capacities).  A vertex in
    both sources and targets yields a length-0 path and is itself a
    separator member.  Returns (paths, separator) with paths a list of
    vertex tuples and separator a sorted list of vertices.
    """
    src_set = sorted(set(sources))
    tgt_set = sorted(set(targets))
    if not src_set or not tgt_set:
        raise ValueError("sources and targets must be nonempty")
    for v in src_set + tgt_set:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    common = sorted(set(src_set) & set(tgt_set))
    excluded = set(common)

    # vertex v splits into v_in = 2v and v_out = 2v + 1; only the vertex
    # arcs are finite, so the min cut consists of vertex arcs alone
    SRC = 2 * g.n
    SNK = 2 * g.n + 1
    INF = 2 * g.n + 2
    net = _FlowNet(2 * g.n + 2, [[] for _ in range(2 * g.n + 2)])
    for v in range(g.n):
        if v in excluded:
            continue
        net.add(2 * v, 2 * v + 1, 1)
        for h in g.out_adj[v]:
            if h not in excluded:
                net.add(2 * v + 1, 2 * h, INF)
    for s in src_set:
        if s not in excluded:
            net.add(SRC, 2 * s, INF)
    for t in tgt_set:
        if t not in excluded:
            net.add(2 * t + 1, SNK, INF)

    flow = {}
    value = 0
    while True:
        # BFS for an augmenting path in the residual network
        prev = {SRC: None}
        queue = [SRC]
        qi = 0
        while qi < len(queue) and SNK not in prev:
            a = queue[qi]
            qi += 1
            for b in net.adj[a]:
                if b not in prev and net.cap[(a, b)] - flow.get((a, b), 0) > 0:
                    prev[b] = a
                    queue.append(b)
        if SNK not in prev:
            break
        b = SNK
        while prev[b] is not None:
            a = prev[b]
            flow[(a, b)] = flow.get((a, b), 0) + 1
            flow[(b, a)] = flow.get((b, a), 0) - 1
            b = a
        value += 1

    # decompose the flow into vertex paths
    paths = [(v,) for v in common]
    out_flow = {a: [] for a in range(net.nodes)}
    for (a, b), f in flow.items():
        if f > 0:
            out_flow.setdefault(a, []).append(b)
    for lst in out_flow.values():
        lst.sort()
    for s in src_set:
        if s in excluded or flow.get((SRC, 2 * s), 0) != 1:
            continue
        path = []
        node = 2 * s
        while node != SNK:
            if node % 2 == 0:
                path.append(node // 2)
            nxt = out_flow[node].pop(0)
            node = nxt
        paths.append(tuple(path))

    # residual reachability gives the min vertex cut
    reach = {SRC}
    queue = [SRC]
    qi = 0
    while qi < len(queue):
        a = queue[qi]
        qi += 1
        for b in net.adj[a]:
            if b not in reach and net.cap[(a, b)] - flow.get((a, b), 0) > 0:
                reach.add(b)
                queue.append(b)
    separator = set(common)
    for v in range(g.n):
        if v in excluded:
            continue
        if 2 * v in reach and 2 * v + 1 not in reach:
            separator.add(v)
    separator = sorted(separator)

    if len(paths) != len(separator):
        raise AssertionError(
            f"flow decomposition mismatch: {len(paths)} paths, {len(separator)} separator"
        )
    return paths, separator
