"""Structure of separation classes under vertex-transitivity.

Separation classes (vertices no friendly partition splits) of a
vertex-transitive digraph carry strong structure: they are independent
sets, every out-neighborhood meets at least 3 of them (degree >= 3), they
all have the same size, and on a prime number of vertices they are
singletons.  The checkers here evaluate those claims and dump any
counterexample in a replayable form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .cycles import ContractionTrace, _MutableDigraph
from .digraph import Digraph, Partition, VertexId, min_out_degree
from .oracle import CapExceeded, is_friendly, separation_report

log = logging.getLogger("amity.transitive")

AUTOMORPHISM_CAP = 12

PROP_INDEPENDENCE = "class-independence"
PROP_SPREAD = "class-spread-3"
PROP_SIZE = "class-size-uniformity"
PROP_PRIME = "prime-singleton-classes"


class PreconditionError(ValueError):
    """The input does not satisfy a stated hypothesis (named in the
    message)."""


class MatchingError(ValueError):
    """No perfect matching; the classes are not linked as required."""


def verify_automorphism(g: Digraph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for v, h in g.edges():
        if not g.has_edge(perm[v], perm[h]):
            return False
    return True


@dataclass(frozen=True)
class AutomorphismSet:
    """Certified automorphisms.  transitive is True when the orbit of
    vertex 0 under the closure of the listed permutations is all of V."""

    perms: tuple
    transitive: bool


def make_automorphism_set(g: Digraph, perms) -> AutomorphismSet:
    perms = tuple(tuple(p) for p in perms)
    for p in perms:
        if not verify_automorphism(g, p):
            raise ValueError("permutation is not an automorphism")
    orbit = {0} if g.n else set()
    frontier = [0] if g.n else []
    while frontier:
        x = frontier.pop()
        for p in perms:
            y = p[x]
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return AutomorphismSet(perms=perms, transitive=len(orbit) == g.n)


def automorphisms(g: Digraph, cap: int = AUTOMORPHISM_CAP) -> AutomorphismSet:
    """Full automorphism enumeration by backtracking with degree-signature
    pruning.  Exponential in the worst case, hence the cap."""
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds the automorphism cap {cap}")
    n = g.n
    sig = [(len(g.out_adj[v]), len(g.in_adj[v])) for v in range(n)]
    image = [-1] * n
    used = [False] * n
    perms = []

    def extend(v: int):
        if v == n:
            perms.append(tuple(image))
            return
        for w in range(n):
            if used[w] or sig[w] != sig[v]:
                continue
            ok = True
            for u in range(v):
                if g.has_edge(v, u) != g.has_edge(w, image[u]) or g.has_edge(
                    u, v
                ) != g.has_edge(image[u], w):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                extend(v + 1)
                used[w] = False
                image[v] = -1

    extend(0)
    return make_automorphism_set(g, perms)


def rotation_automorphisms(g: Digraph) -> AutomorphismSet:
    """Cyclic shifts v -> v + k (mod n) that preserve the edges; the cheap
    transitivity witness for circulant digraphs."""
    n = g.n
    valid = []
    for k in range(n):
        perm = tuple((v + k) % n for v in range(n))
        if verify_automorphism(g, perm):
            valid.append(perm)
    return make_automorphism_set(g, valid)


def find_automorphism_mapping(g: Digraph, src: VertexId, dst: VertexId) -> Optional[tuple]:
    """One automorphism sending src to dst, or None."""
    n = g.n
    sig = [(len(g.out_adj[v]), len(g.in_adj[v])) for v in range(n)]
    if sig[src] != sig[dst]:
        return None
    order = [src] + [v for v in range(n) if v != src]
    pos = {v: i for i, v in enumerate(order)}
    image = {}
    used = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        candidates = [dst] if i == 0 else [w for w in range(n) if w not in used and sig[w] == sig[v]]
        for w in candidates:
            if w in used:
                continue
            ok = True
            for u in image:
                if g.has_edge(v, u) != g.has_edge(w, image[u]) or g.has_edge(
                    u, v
                ) != g.has_edge(image[u], w):
                    ok = False
                    break
            if ok:
                image[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                used.remove(w)
                del image[v]
        return False

    if not extend(0):
        return None
    return tuple(image[v] for v in range(n))


def is_vertex_transitive(g: Digraph) -> bool:
    if g.n <= 1:
        return True
    degrees = {(len(g.out_adj[v]), len(g.in_adj[v])) for v in range(g.n)}
    if len(degrees) > 1:
        return False
    return all(find_automorphism_mapping(g, 0, v) is not None for v in range(1, g.n))


def _transitivity_evidence(g: Digraph, auts: Optional[AutomorphismSet]) -> None:
    if auts is not None:
        for p in auts.perms:
            if not verify_automorphism(g, p):
                raise ValueError("supplied permutation is not an automorphism")
        if not auts.transitive:
            raise PreconditionError("digraph is not vertex-transitive")
        return
    if not is_vertex_transitive(g):
        raise PreconditionError("digraph is not vertex-transitive")


@dataclass(frozen=True)
class ClassStructureVerdict:
    n: int
    degree: int
    classes: tuple
    independence_ok: bool
    spread_ok: Optional[bool]  # None when degree < 3 (claim not applicable)
    size_uniform_ok: bool
    violations: tuple
    dumps: tuple

    @property
    def ok(self) -> bool:
        return self.independence_ok and self.size_uniform_ok and self.spread_ok is not False


def check_class_structure(
    g: Digraph, auts: Optional[AutomorphismSet] = None, cap: Optional[int] = None
) -> ClassStructureVerdict:
    """Evaluate the separation-class structure claims on a vertex-transitive
    digraph: classes independent, out-neighborhoods meeting >= 3 classes
    (degree >= 3), classes equal-sized.  Violations are collected and dumped
    in replayable form."""
    from .io import counterexample_dump

    _transitivity_evidence(g, auts)
    if g.n == 0:
        return ClassStructureVerdict(0, 0, (), True, None, True, (), ())
    degrees = {len(row) for row in g.out_adj}
    if len(degrees) != 1:
        raise ValueError("vertex-transitive digraph must be out-regular")
    d = degrees.pop()
    rep = separation_report(g, 1, cap)
    class_of = [0] * g.n
    for i, cls in enumerate(rep.classes):
        for v in cls:
            class_of[v] = i

    violations = []
    dumps = []
    independence_ok = True
    for cls in rep.classes:
        members = set(cls)
        for v in cls:
            for h in g.out_adj[v]:
                if h in members:
                    independence_ok = False
                    violations.append({"kind": PROP_INDEPENDENCE, "edge": (v, h)})
    spread_ok: Optional[bool] = None
    if d >= 3:
        spread_ok = True
        for v in range(g.n):
            met = len({class_of[h] for h in g.out_adj[v]})
            if met < 3:
                spread_ok = False
                violations.append({"kind": PROP_SPREAD, "vertex": v, "classes_met": met})
    size_uniform_ok = len({len(cls) for cls in rep.classes}) <= 1
    if not size_uniform_ok:
        violations.append(
            {"kind": PROP_SIZE, "class_sizes": [len(c) for c in rep.classes]}
        )
    for prop in (PROP_INDEPENDENCE, PROP_SPREAD, PROP_SIZE):
        bad = [v for v in violations if v["kind"] == prop]
        if bad:
            dumps.append(counterexample_dump(g, prop, {"violations": bad}))
    return ClassStructureVerdict(
        n=g.n,
        degree=d,
        classes=rep.classes,
        independence_ok=independence_ok,
        spread_ok=spread_ok,
        size_uniform_ok=size_uniform_ok,
        violations=tuple(violations),
        dumps=tuple(dumps),
    )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PrimeSeparabilityVerdict:
    n: int
    ok: bool
    class_sizes: tuple
    dump: Optional[str]


def prime_separability(
    g: Digraph, auts: Optional[AutomorphismSet] = None, cap: Optional[int] = None
) -> PrimeSeparabilityVerdict:
    """On a prime number of vertices, a vertex-transitive digraph with min
    out-degree >= 3 must have every separation class a singleton (all pairs
    separable).  Preconditions are errors; a falsifying class structure is
    reported with a replayable dump."""
    from .io import counterexample_dump

    if not _is_prime(g.n):
        raise PreconditionError(f"vertex count must be prime, got {g.n}")
    _transitivity_evidence(g, auts)
    if min_out_degree(g) < 3:
        raise PreconditionError("minimum out-degree must be at least 3")
    rep = separation_report(g, 1, cap)
    sizes = tuple(len(c) for c in rep.classes)
    ok = all(s == 1 for s in sizes)
    dump = None
    if not ok:
        dump = counterexample_dump(g, PROP_PRIME, {"class_sizes": list(sizes)})
    return PrimeSeparabilityVerdict(n=g.n, ok=ok, class_sizes=sizes, dump=dump)


def singleton_walk(g: Digraph, p: Partition, v0: VertexId) -> Optional[VertexId]:
    """Walk from v0 along critical in-neighbors to a vertex with none.

    A critical in-neighbor of x is a block-0 vertex whose only block-0
    out-neighbor is x; moving the returned vertex across the partition
    stays friendly, which is what makes it a singleton-class witness.
    Requires: p friendly, v0 in block 0 with at least 2 same-block and 1
    cross-block out-neighbors.  A revisit or an immovable endpoint would
    contradict the underlying lemma; both are logged and reported as None.
    """
    if p.n != g.n:
        raise ValueError("partition size mismatch")
    if not is_friendly(g, p, 1):
        raise ValueError("partition is not friendly")
    if not 0 <= v0 < g.n:
        raise ValueError(f"vertex {v0} out of range")
    if p.block[v0] != 0:
        raise ValueError(f"vertex {v0} must lie in block 0")
    mask1 = p.block1_mask()
    mask0 = ((1 << g.n) - 1) ^ mask1
    out_masks = g.out_masks
    if (out_masks[v0] & mask0).bit_count() < 2:
        raise ValueError(f"vertex {v0} needs at least 2 same-block out-neighbors")
    if not out_masks[v0] & mask1:
        raise ValueError(f"vertex {v0} needs a cross-block out-neighbor")

    cur = v0
    visited = {v0}
    while True:
        crits = [
            w
            for w in g.in_adj[cur]
            if p.block[w] == 0 and out_masks[w] & mask0 == 1 << cur
        ]
        if not crits:
            if not out_masks[cur] & mask1:
                log.warning(
                    "walk endpoint %d has no cross-block out-neighbor; "
                    "input outside the lemma regime",
                    cur,
                )
                return None
            return cur
        nxt = min(crits)
        if nxt in visited:
            log.warning(
                "critical in-neighbor walk revisited %d; this would falsify "
                "the termination argument",
                nxt,
            )
            return None
        visited.add(nxt)
        cur = nxt


@dataclass(frozen=True)
class QuotientDigraph:
    """Classes as vertices; an edge K -> L when some member of K sends an
    edge to a member of L (K != L)."""

    classes: tuple
    out_adj: tuple

    def digraph(self) -> Digraph:
        return Digraph(len(self.classes), self.out_adj)


def quotient(g: Digraph, classes) -> QuotientDigraph:
    classes = tuple(tuple(c) for c in classes)
    seen = [v for cls in classes for v in cls]
    if sorted(seen) != list(range(g.n)):
        raise ValueError("classes must partition the vertex set")
    class_of = [0] * g.n
    for i, cls in enumerate(classes):
        for v in cls:
            class_of[v] = i
    rows = [set() for _ in classes]
    for v, h in g.edges():
        a, b = class_of[v], class_of[h]
        if a != b:
            rows[a].add(b)
    return QuotientDigraph(classes=classes, out_adj=tuple(tuple(sorted(r)) for r in rows))


def hall_matching_contract(g: Digraph, k_class, l_class) -> tuple:
    """Match each vertex of K to a distinct out-neighbor in L (augmenting
    paths) and contract every matched pair, K-side absorbed into L-side.
    Raises MatchingError when no K-saturating matching exists, which signals
    a precondition violation.  Returns (contracted digraph, trace)."""
    K = sorted(set(k_class))
    L = sorted(set(l_class))
    if not K or not L:
        raise ValueError("classes must be nonempty")
    if set(K) & set(L):
        raise ValueError("classes must be disjoint")
    for v in K + L:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    adj = {k: [l for l in L if g.has_edge(k, l)] for k in K}
    match_of_l = {}
    match_of_k = {}

    def augment(k: VertexId, banned: set) -> bool:
        for l in adj[k]:
            if l in banned:
                continue
            banned.add(l)
            if l not in match_of_l or augment(match_of_l[l], banned):
                match_of_l[l] = k
                match_of_k[k] = l
                return True
        return False

    for k in K:
        if not augment(k, set()):
            raise MatchingError(
                f"no perfect matching from the first class into the second "
                f"(stuck at vertex {k})"
            )

    m = _MutableDigraph(g)
    for k in K:
        m.contract(k, match_of_k[k])
    return m.finalize()
