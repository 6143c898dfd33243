"""The two extremal fully-dominated cubic digraphs.

On 7 or 8 vertices there are, up to isomorphism, exactly two digraphs in
which every out-degree is 3, no 2-cycle occurs, and every edge is dominated
(some third vertex sends edges to both endpoints).  They are reconstructed
here by completing a forced skeleton with a constraint search; the search
asserts the completion is unique, so the build doubles as a check.

Structure shared by both: a hub v sending to a 3-cycle w1 w2 w3, a 3-cycle
u1 u2 u3 all sending back to v, and a matching u_i -> w_pi(i).  The right
variant (7 vertices) uses the transposition pi = (2 3); the left variant
(8 vertices) uses pi = identity and adds an extra hub x that the w-cycle
feeds and that sends to all u_i.
"""

from __future__ import annotations

import itertools

from .digraph import Digraph
from .cycles import is_dominated

V, U1, U2, U3, W1, W2, W3, X = range(8)

_LABELS_RIGHT = {"v": V, "u1": U1, "u2": U2, "u3": U3, "w1": W1, "w2": W2, "w3": W3}
_LABELS_LEFT = dict(_LABELS_RIGHT, x=X)

_cache: dict = {}


def _seed(variant: str) -> tuple:
    u = (U1, U2, U3)
    w = (W1, W2, W3)
    edges = [(V, W1), (V, W2), (V, W3)]
    edges += [(ui, V) for ui in u]
    edges += [(u[i], u[(i + 1) % 3]) for i in range(3)]
    edges += [(w[i], w[(i + 1) % 3]) for i in range(3)]
    if variant == "left":
        n = 8
        edges += [(u[i], w[i]) for i in range(3)]  # matching, identity
    elif variant == "right":
        n = 7
        edges += [(U1, W1), (U2, W3), (U3, W2)]  # matching, transposition
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return n, edges


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


def _qualifies(g: Digraph) -> bool:
    if any(len(row) != 3 for row in g.out_adj):
        return False
    for v, h in g.edges():
        if g.has_edge(h, v):
            return False
    for v, h in g.edges():
        if not is_dominated(g, v, h):
            return False
    return _underlying_connected(g)


def _completions(n: int, seed_edges: list) -> list:
    """All ways to raise every out-degree to 3 without self-loops,
    duplicates, or 2-cycles, then filtered to qualifying digraphs."""
    out = [set() for _ in range(n)]
    for a, b in seed_edges:
        out[a].add(b)
    deficient = [v for v in range(n) if len(out[v]) < 3]
    results = []

    def place(i: int):
        if i == len(deficient):
            rows = [sorted(out[v]) for v in range(n)]
            g = Digraph.from_out_lists(n, rows)
            if _qualifies(g):
                results.append(g)
            return
        v = deficient[i]
        need = 3 - len(out[v])
        candidates = [
            h for h in range(n)
            if h != v and h not in out[v] and v not in out[h]
        ]
        for extra in itertools.combinations(candidates, need):
            # re-check 2-cycles against choices made for earlier vertices
            if any(v in out[h] for h in extra):
                continue
            out[v].update(extra)
            place(i + 1)
            out[v].difference_update(extra)

    place(0)
    return results


def fully_dominated_cubic(variant: str) -> tuple:
    """Build one of the two digraphs ('left': 8 vertices, 'right': 7).

    Returns (digraph, labels) with labels mapping the role names
    v, u1..u3, w1..w3 (and x on the left variant) to vertex ids.
    Raises AssertionError if the constraint search does not find exactly
    one completion, which would mean the skeleton is wrong.
    """
    if variant in _cache:
        return _cache[variant]
    n, seed_edges = _seed(variant)
    found = _completions(n, seed_edges)
    if len(found) != 1:
        raise AssertionError(
            f"expected a unique {variant} completion, found {len(found)}"
        )
    labels = _LABELS_LEFT if variant == "left" else _LABELS_RIGHT
    result = (found[0], dict(labels))
    _cache[variant] = result
    return result
