"""Probabilistic separation: resampling solvers and sparse subdigraph
extraction, all deterministic for a fixed seed.

The resamplers pin two vertices to opposite blocks, assign every other
vertex a uniform bit, and repeatedly resample around the lowest-index
violated vertex until no vertex lacks same-block out-neighbors.  Every
returned partition is re-validated against the full digraph before being
handed back.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, e
from typing import Optional

from .digraph import Digraph, Partition, VertexId, min_out_degree
from .oracle import is_friendly

_ONE_THIRD = 1.0 / 3.0


@dataclass(frozen=True)
class ResampleConfig:
    """seed: 64-bit RNG seed; max_rounds: resampling budget (>= 1);
    r: friendliness target for lll_separate (chernoff_r_separate derives its
    own target from the degree)."""

    seed: int
    max_rounds: int
    r: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if self.r < 1:
            raise ValueError("r must be at least 1")


class ResampleExhausted(RuntimeError):
    """Budget ran out before a valid partition appeared; retryable with a
    fresh seed."""

    def __init__(self, message: str, rounds: int, seed: int):
        super().__init__(message)
        self.rounds = rounds
        self.seed = seed


class TrialsExhausted(RuntimeError):
    """Every sampling trial produced a set that was too large."""

    def __init__(self, message: str, sizes: tuple):
        super().__init__(message)
        self.sizes = sizes


def lll_regime_bound(d: int) -> float:
    """Largest in-degree for which the r=1 separation is guaranteed at
    out-degree d (diagnostic only)."""
    return (2 ** (d - 1) - e) / (e * d)


def chernoff_regime_bound(d: int) -> float:
    """In-degree bound for the quarter-degree target (diagnostic only)."""
    return e ** ((d - 1) / 16 - 1) / d


def chernoff_target(d: int) -> int:
    """Same-block out-neighbor target derived from the degree."""
    return (d - 1) // 4 + 1


def _resample(
    g: Digraph, v1: VertexId, v2: VertexId, r: int, seed: int, max_rounds: int
) -> Partition:
    n = g.n
    if v1 == v2 or not (0 <= v1 < n and 0 <= v2 < n):
        raise ValueError("pinned vertices must be distinct vertices of the digraph")
    d = min_out_degree(g)
    if d < r:
        raise ValueError(f"target r={r} exceeds the minimum out-degree {d}")
    # the proofs work on a d-out-regular digraph: keep the first d
    # out-edges of every vertex, in adjacency order
    trunc_mask = []
    trunc_rows = []
    for row in g.out_adj:
        kept = row[:d]
        trunc_rows.append(kept)
        m = 0
        for h in kept:
            m |= 1 << h
        trunc_mask.append(m)

    rng = random.Random(seed)
    block = [rng.getrandbits(1) for _ in range(n)]
    block[v1] = 0
    block[v2] = 1
    mask1 = 0
    for v in range(n):
        if block[v]:
            mask1 |= 1 << v
    full = (1 << n) - 1

    def violated() -> Optional[int]:
        m0 = full ^ mask1
        for v in range(n):
            same = trunc_mask[v] & (mask1 if block[v] else m0)
            if same.bit_count() < r:
                return v
        return None

    for _ in range(max_rounds):
        w = violated()
        if w is None:
            p = Partition(tuple(block))
            if not is_friendly(g, p, r) or p.block[v1] == p.block[v2]:
                raise AssertionError("resampler produced an invalid partition")
            return p
        for x in sorted({w, *trunc_rows[w]} - {v1, v2}):
            bit = rng.getrandbits(1)
            if bit != block[x]:
                block[x] = bit
                mask1 ^= 1 << x
    raise ResampleExhausted(
        f"no valid partition within {max_rounds} rounds", rounds=max_rounds, seed=seed
    )


def lll_separate(g: Digraph, v1: VertexId, v2: VertexId, config: ResampleConfig) -> Partition:
    """Friendly partition separating v1 from v2 found by resampling.

    Termination is guaranteed in expectation when the maximum in-degree is
    at most lll_regime_bound(min out-degree); outside that regime the call
    still either returns a valid partition or raises ResampleExhausted."""
    return _resample(g, v1, v2, config.r, config.seed, config.max_rounds)


def chernoff_r_separate(
    g: Digraph, v1: VertexId, v2: VertexId, config: ResampleConfig
) -> Partition:
    """Like lll_separate but targets r = (d-1)//4 + 1 same-block
    out-neighbors per vertex, d being the minimum out-degree.  config.r is
    ignored; the target comes from the degree."""
    r = chernoff_target(min_out_degree(g))
    return _resample(g, v1, v2, r, config.seed, config.max_rounds)


# ---- sparse subdigraph extraction ----

@dataclass(frozen=True)
class SubdigraphSample:
    """y_set: the sampled vertex set; trial_count: trials consumed;
    sizes: |Y| for every trial including the successful last one."""

    y_set: frozenset
    trial_count: int
    sizes: tuple


def expected_y_fraction(d: int, r: int) -> Fraction:
    """Exact upper bound on E[|Y|]/n for the one-third sampling plus top-up
    construction at out-degree d and target r."""
    total = Fraction(1, 3)
    third = Fraction(1, 3)
    two_thirds = Fraction(2, 3)
    for k in range(r + 1):
        total += (r - k) * comb(d, k) * third**k * two_thirds ** (d - k)
    return total


@lru_cache(maxsize=None)
def compute_dr(r: int) -> int:
    """Smallest out-degree d at which the expected fraction drops below
    one half, i.e. the degree from which a sub-half vertex set inducing
    min out-degree r is guaranteed to exist."""
    if r < 1:
        raise ValueError("r must be at least 1")
    d = 1
    while True:
        if expected_y_fraction(d, r) < Fraction(1, 2):
            return d
        d += 1


def extract_small_subdigraph(
    g: Digraph, r: int = 2, seed: int = 0, max_trials: int = 100
) -> SubdigraphSample:
    """Sample a vertex set Y with |Y| < n/2 inducing min out-degree >= r.

    Each trial takes every vertex independently with probability 1/3, then
    tops up: vertices are visited in ascending order and any vertex with
    fewer than r out-neighbors in Y pulls its first missing out-neighbors
    (adjacency order) into Y.  By construction every vertex of the host ends
    up with at least r out-neighbors in Y, so Y always induces min
    out-degree >= r; the trial succeeds when additionally 2|Y| < n.
    Requires min out-degree >= compute_dr(r), the regime where success is
    expected.  Raises TrialsExhausted (with all trial sizes) otherwise."""
    n = g.n
    if n == 0:
        raise ValueError("empty digraph")
    if r < 1:
        raise ValueError("r must be at least 1")
    need_d = compute_dr(r)
    if min_out_degree(g) < need_d:
        raise ValueError(
            f"minimum out-degree {min_out_degree(g)} is below the required {need_d}"
        )
    if max_trials < 1:
        raise ValueError("max_trials must be at least 1")

    rng = random.Random(seed)
    out_masks = g.out_masks
    sizes = []
    for trial in range(max_trials):
        in_y = [rng.random() < _ONE_THIRD for _ in range(n)]
        y_mask = 0
        for v in range(n):
            if in_y[v]:
                y_mask |= 1 << v
        for v in range(n):
            need = r - (out_masks[v] & y_mask).bit_count()
            if need > 0:
                for h in g.out_adj[v]:
                    if not in_y[h]:
                        in_y[h] = True
                        y_mask |= 1 << h
                        need -= 1
                        if need == 0:
                            break
                if need > 0:
                    raise AssertionError("out-degree too small to top up")
        y = frozenset(v for v in range(n) if in_y[v])
        sizes.append(len(y))
        if 2 * len(y) < n:
            for v in range(n):
                if (out_masks[v] & y_mask).bit_count() < r:
                    raise AssertionError("top-up missed a vertex")
            return SubdigraphSample(y_set=y, trial_count=trial + 1, sizes=tuple(sizes))
    raise TrialsExhausted(
        f"no sub-half set within {max_trials} trials", sizes=tuple(sizes)
    )
