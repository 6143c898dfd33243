"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: direct definitions, exhaustive loops,
and networkx where a well-tested algorithm exists.  None of it shares code
with the package under test, so agreement between the two routes is evidence
rather than tautology.
"""

import itertools

import networkx as nx

from amity import Digraph


def dg(n, rows):
    """Shorthand for building a Digraph from literal adjacency rows."""
    return Digraph(n, [list(r) for r in rows])


def to_nx(g):
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    for u in range(g.n):
        for v in g.out_adj[u]:
            h.add_edge(u, v)
    return h


def brute_is_friendly(g, blocks, r=1):
    """Check the friendliness condition straight from the definition."""
    side = {}
    for b, vs in enumerate(blocks):
        for v in vs:
            side[v] = b
    if len(side) != g.n or len(blocks) != 2:
        return False
    if not blocks[0] or not blocks[1]:
        return False
    for v in range(g.n):
        same = sum(1 for w in g.out_adj[v] if side[w] == side[v])
        if same < r:
            return False
    return True


def brute_friendly_partitions(g, r=1, include_trivial=False):
    """All friendly 2-partitions with vertex 0 in block 0, by direct scan."""
    found = []
    if g.n == 0:
        # the trivial partition is vacuously friendly on no vertices
        return [((), ())] if include_trivial else found
    rest = list(range(1, g.n))
    for k in range(0, g.n):
        for ones in itertools.combinations(rest, k):
            block1 = set(ones)
            block0 = tuple(v for v in range(g.n) if v not in block1)
            blocks = (block0, tuple(sorted(block1)))
            if not block1:
                if not include_trivial:
                    continue
                if all(len(g.out_adj[v]) >= r for v in range(g.n)):
                    found.append(blocks)
                continue
            if brute_is_friendly(g, blocks, r):
                found.append(blocks)
    return found


def brute_can_separate(g, pair, r=1):
    """First friendly partition splitting the pair, or None."""
    u, v = pair
    for blocks in brute_friendly_partitions(g, r):
        in1 = set(blocks[1])
        if (u in in1) != (v in in1):
            return blocks
    return None


def brute_classes(g, r=1):
    """Group vertices by their membership pattern across friendly partitions."""
    parts = brute_friendly_partitions(g, r)
    codes = {}
    for v in range(g.n):
        code = tuple(v in set(b1) for _, b1 in [(p[0], p[1]) for p in parts])
        codes.setdefault(code, []).append(v)
    return sorted(tuple(vs) for vs in codes.values())


def nx_sccs(g):
    return [frozenset(c) for c in nx.strongly_connected_components(to_nx(g))]


def nx_simple_cycles(g, max_len=None):
    out = []
    for cyc in nx.simple_cycles(to_nx(g)):
        if max_len is None or len(cyc) <= max_len:
            out.append(canonical_cycle(cyc))
    return set(out)


def canonical_cycle(cyc):
    """Rotate a cycle so its smallest vertex comes first."""
    i = cyc.index(min(cyc))
    return tuple(cyc[i:]) + tuple(cyc[:i])


def has_k_disjoint_cycles(g, k):
    """Exhaustive search for k vertex-disjoint simple cycles."""
    cycles = sorted(nx_simple_cycles(g), key=len)

    def rec(start, chosen, used):
        if len(chosen) == k:
            return True
        for i in range(start, len(cycles)):
            c = cycles[i]
            if used.isdisjoint(c):
                if rec(i + 1, chosen + [c], used | set(c)):
                    return True
        return False

    return rec(0, [], frozenset())


def nx_max_disjoint_paths(g, sources, targets):
    """Max number of vertex-disjoint paths from sources to targets via nx flow.

    Vertices are split into in/out copies with unit capacity, endpoints
    included, so each source or target can serve at most one path.
    """
    h = nx.DiGraph()
    src, snk = "S", "T"
    big = 2 * g.n + 2
    for v in range(g.n):
        h.add_edge(("i", v), ("o", v), capacity=1)
    for u in range(g.n):
        for v in g.out_adj[u]:
            h.add_edge(("o", u), ("i", v), capacity=big)
    for s in sources:
        h.add_edge(src, ("i", s), capacity=big)
    for t in targets:
        h.add_edge(("o", t), snk, capacity=big)
    if not sources or not targets:
        return 0
    return nx.maximum_flow_value(h, src, snk)
