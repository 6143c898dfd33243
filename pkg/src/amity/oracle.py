"""Friendly-partition oracles.

A 2-partition is r-friendly when every vertex has at least r out-neighbors
inside its own block.  "Friendly" means 1-friendly.  The trivial partition
(one empty block) is friendly exactly when the minimum out-degree is >= r.

Enumeration is canonicalized so a partition and its block-swapped mirror are
never both emitted: vertex 0 always sits in block 0, and results are ordered
by the block-1 membership mask read as an ascending integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional, Sequence

import numpy as np

from .digraph import Digraph, Partition, VertexId, min_out_degree

DEFAULT_CAP = 24
_NUMPY_MIN_N = 17
_CHUNK = 1 << 18


class CapExceeded(ValueError):
    """Instance is larger than the exhaustive-search cap."""


def _resolve_cap(cap: Optional[int]) -> int:
    return DEFAULT_CAP if cap is None else cap


def is_friendly(g: Digraph, p: Partition, r: int = 1) -> bool:
    """True when every vertex has at least r out-neighbors in its own block."""
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} vertices, digraph has {g.n}")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return True
    mask1 = p.block1_mask()
    mask0 = ((1 << g.n) - 1) ^ mask1
    masks = g.out_masks
    block = p.block
    if r == 1:
        for v in range(g.n):
            if not masks[v] & (mask1 if block[v] else mask0):
                return False
        return True
    for v in range(g.n):
        if (masks[v] & (mask1 if block[v] else mask0)).bit_count() < r:
            return False
    return True


def extend_friendly_sets(g: Digraph, u_set, w_set) -> Partition:
    """Grow disjoint internally-friendly seed sets U and W into a full
    friendly partition: block 0 becomes U plus every vertex with a path to U
    avoiding W, block 1 the rest (which contains W).

    Each seed must be nonempty and every member needs an out-neighbor inside
    its own seed; the digraph needs minimum out-degree >= 1.  Errors name the
    offending vertex.
    """
    u_set = frozenset(u_set)
    w_set = frozenset(w_set)
    if not u_set or not w_set:
        raise ValueError("seed sets must be nonempty")
    overlap = u_set & w_set
    if overlap:
        raise ValueError(f"seed sets overlap at vertex {min(overlap)}")
    if min_out_degree(g) < 1:
        deg0 = next(v for v in range(g.n) if not g.out_adj[v])
        raise ValueError(f"vertex {deg0} has out-degree 0")
    for name, seed in (("first", u_set), ("second", w_set)):
        for v in seed:
            if not 0 <= v < g.n:
                raise ValueError(f"vertex {v} out of range")
            if not any(h in seed for h in g.out_adj[v]):
                raise ValueError(
                    f"vertex {v} has no out-neighbor inside the {name} seed set"
                )

    in_adj = g.in_adj
    block0 = set(u_set)
    queue = sorted(u_set)
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for w in in_adj[x]:
            if w not in block0 and w not in w_set:
                block0.add(w)
                queue.append(w)
    p = Partition(tuple(0 if v in block0 else 1 for v in range(g.n)))
    if not is_friendly(g, p, 1):
        raise AssertionError("extension produced an unfriendly partition")
    return p


# ---- canonical enumeration of friendly partitions ----

def _friendly_block1_masks(
    g: Digraph, r: int, include_trivial: bool, cap: Optional[int] = None
) -> list:
    """Block-1 membership masks of friendly partitions with vertex 0 pinned
    to block 0, ascending.  Mask 0 is the trivial partition."""
    cap = _resolve_cap(cap)
    if g.n > cap:
        raise CapExceeded(f"n={g.n} exceeds the exhaustive cap {cap}")
    n = g.n
    if n == 0:
        return [0] if include_trivial else []
    if r == 1 and n >= _NUMPY_MIN_N:
        arr = _friendly_masks_numpy(g)
        out = [int(x) for x in arr]
        if include_trivial and min_out_degree(g) >= 1:
            out.insert(0, 0)
        return out
    full = (1 << n) - 1
    masks = g.out_masks
    out = []
    for t in range(1 << (n - 1)):
        m1 = t << 1
        if m1 == 0:
            if include_trivial and min_out_degree(g) >= r:
                out.append(0)
            continue
        m0 = full ^ m1
        ok = True
        if r == 1:
            for v in range(n):
                if not masks[v] & (m1 if m1 >> v & 1 else m0):
                    ok = False
                    break
        else:
            for v in range(n):
                if (masks[v] & (m1 if m1 >> v & 1 else m0)).bit_count() < r:
                    ok = False
                    break
        if ok:
            out.append(m1)
    return out


def _friendly_masks_numpy(g: Digraph) -> np.ndarray:
    """Vectorized r=1 scan over all canonical nontrivial block-1 masks."""
    n = g.n
    full = np.uint32((1 << n) - 1)
    masks = g.out_masks
    chunks = []
    for start in range(0, 1 << (n - 1), _CHUNK):
        stop = min(start + _CHUNK, 1 << (n - 1))
        t = np.arange(start, stop, dtype=np.uint32)
        m1 = t << np.uint32(1)
        m0 = m1 ^ full
        ok = np.ones(len(t), dtype=bool)
        for v in range(n):
            mv = np.uint32(masks[v])
            if v == 0:
                ok &= (m0 & mv) != 0
            else:
                in1 = ((m1 >> np.uint32(v)) & np.uint32(1)).astype(bool)
                ok &= np.where(in1, m1 & mv, m0 & mv) != 0
        sel = m1[ok]
        if start == 0 and len(sel) and sel[0] == 0:
            sel = sel[1:]  # trivial handled by the caller
        chunks.append(sel)
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint32)


def enumerate_friendly(
    g: Digraph, r: int = 1, include_trivial: bool = False, cap: Optional[int] = None
) -> list:
    """All friendly partitions up to block swap, deterministic order.

    The trivial partition (block 1 empty) is included only when asked for
    and only when it is r-friendly, i.e. min out-degree >= r.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    masks = _friendly_block1_masks(g, r, include_trivial, cap)
    return [Partition.from_block1_mask(g.n, m) for m in masks]


# ---- separation ----

def can_separate(
    g: Digraph, s, r: int = 1, cap: Optional[int] = None
) -> Optional[Partition]:
    """A friendly partition putting members of s in both blocks, or None.

    Backtracking with unit propagation: a vertex whose possible same-block
    out-neighbors in one block drop below r is forced into the other block.
    Complete within the cap.
    """
    s = sorted(set(s))
    if len(s) < 2:
        raise ValueError("separation set needs at least 2 vertices")
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    if r < 1:
        raise ValueError("r must be at least 1")
    cap_val = _resolve_cap(cap)
    if g.n > cap_val:
        raise CapExceeded(f"n={g.n} exceeds the exhaustive cap {cap_val}")

    n = g.n
    full = (1 << n) - 1
    masks = g.out_masks
    in_deg = [len(row) for row in g.in_adj]
    order = sorted(range(n), key=lambda v: (-in_deg[v], v))

    def propagate(m0: int, m1: int) -> Optional[tuple]:
        while True:
            changed = False
            un = full ^ m0 ^ m1
            for v in range(n):
                mv = masks[v]
                c0 = (mv & (m0 | un)).bit_count()
                c1 = (mv & (m1 | un)).bit_count()
                bit = 1 << v
                if m0 & bit:
                    if c0 < r:
                        return None
                elif m1 & bit:
                    if c1 < r:
                        return None
                else:
                    if c0 < r and c1 < r:
                        return None
                    if c0 < r:
                        m1 |= bit
                        changed = True
                    elif c1 < r:
                        m0 |= bit
                        changed = True
            if not changed:
                return m0, m1

    def solve(m0: int, m1: int) -> Optional[int]:
        state = propagate(m0, m1)
        if state is None:
            return None
        m0, m1 = state
        if m0 | m1 == full:
            return m1
        v = next(u for u in order if not ((m0 | m1) >> u & 1))
        bit = 1 << v
        for trial0, trial1 in ((m0 | bit, m1), (m0, m1 | bit)):
            res = solve(trial0, trial1)
            if res is not None:
                return res
        return None

    anchor = s[0]
    for b in s[1:]:
        m1 = solve(1 << anchor, 1 << b)
        if m1 is not None:
            p = Partition.from_block1_mask(n, m1)
            if not is_friendly(g, p, r):
                raise AssertionError("separation search returned an unfriendly partition")
            if p.block[anchor] == p.block[b]:
                raise AssertionError("separation search failed to split the pair")
            return p
    return None


@dataclass(frozen=True)
class SeparationReport:
    """Separation structure of a digraph at a given r.

    partition_count counts nontrivial friendly partitions only
    (counts_trivial records the convention; total_with_trivial gives the
    other count).  codes[v] is the membership bit string of vertex v across
    the canonical partition list; vertices are in the same class exactly
    when their codes are equal.
    """

    n: int
    r: int
    partition_count: int
    counts_trivial: bool
    total_with_trivial: int
    classes: tuple
    codes: tuple


def separation_report(g: Digraph, r: int = 1, cap: Optional[int] = None) -> SeparationReport:
    masks = _friendly_block1_masks(g, r, include_trivial=False, cap=cap)
    n = g.n
    codes = ["" for _ in range(n)]
    if masks:
        if len(masks) > 4096 and n:
            arr = np.asarray(masks, dtype=np.uint32)
            for v in range(n):
                bits = ((arr >> np.uint32(v)) & np.uint32(1)).astype(np.uint8) + ord("0")
                codes[v] = bits.tobytes().decode("ascii")
        else:
            for v in range(n):
                codes[v] = "".join("1" if m >> v & 1 else "0" for m in masks)
    groups = {}
    for v in range(n):
        groups.setdefault(codes[v], []).append(v)
    classes = tuple(
        tuple(members) for members in sorted(groups.values(), key=lambda ms: ms[0])
    )
    trivial = 1 if min_out_degree(g) >= r and n > 0 else 0
    return SeparationReport(
        n=n,
        r=r,
        partition_count=len(masks),
        counts_trivial=False,
        total_with_trivial=len(masks) + trivial,
        classes=classes,
        codes=tuple(codes),
    )


# ---- exhaustive generation of small out-regular digraphs ----

def count_out_degree_exact_digraphs(n: int, d: int) -> int:
    return comb(n - 1, d) ** n if n > 0 else 1 if d == 0 else 0


def iter_out_degree_exact_digraphs(n: int, d: int) -> Iterator[Digraph]:
    """Every digraph on n labeled vertices where each vertex has out-degree
    exactly d, in lexicographic order of the adjacency structure."""
    if d > n - 1:
        raise ValueError(f"out-degree {d} infeasible on {n} vertices")
    per_vertex = [
        tuple(itertools.combinations([u for u in range(n) if u != v], d))
        for v in range(n)
    ]
    for rows in itertools.product(*per_vertex):
        yield Digraph.from_out_lists(n, rows)
