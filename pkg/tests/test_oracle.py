"""Friendly-partition enumeration and separation, checked against brute force."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from amity import (
    CapExceeded,
    Digraph,
    Partition,
    can_separate,
    enumerate_friendly,
    extend_friendly_sets,
    is_friendly,
    separation_report,
)
from amity.oracle import (
    count_out_degree_exact_digraphs,
    iter_out_degree_exact_digraphs,
)
from conftest import digraphs, regular_out_digraphs
from oracles import dg


def blocks_of(p):
    return (p.block_vertices(0), p.block_vertices(1))


class TestIsFriendly:
    def test_trivial_needs_min_degree(self):
        g = dg(3, [[1], [2], [0]])
        assert is_friendly(g, Partition([0, 0, 0]))
        dag = dg(3, [[1], [2], []])
        assert not is_friendly(dag, Partition([0, 0, 0]))

    def test_split_cycle_is_unfriendly(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        assert not is_friendly(g, Partition([0, 0, 0, 1, 1, 1]))

    def test_two_triangles_split(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        assert is_friendly(g, Partition([0, 0, 0, 1, 1, 1]))

    def test_r2_needs_two_neighbors(self):
        g = dg(4, [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]])
        assert is_friendly(g, Partition([0, 0, 0, 0]), r=2)
        assert not is_friendly(g, Partition([0, 0, 1, 1]), r=2)

    def test_size_mismatch_rejected(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError):
            is_friendly(g, Partition([0, 1]))

    @given(digraphs(min_n=1), st.integers(0, 2**8 - 1), st.integers(1, 3))
    def test_matches_definition(self, g, bits, r):
        p = Partition.from_block1_mask(g.n, bits & ((1 << g.n) - 1))
        if p.is_trivial():
            return
        assert is_friendly(g, p, r) == oracles.brute_is_friendly(g, blocks_of(p), r)


class TestEnumerateFriendly:
    def test_cycle_has_only_trivial(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        assert enumerate_friendly(g) == []
        withtriv = enumerate_friendly(g, include_trivial=True)
        assert len(withtriv) == 1 and withtriv[0].is_trivial()

    def test_two_triangles(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        parts = enumerate_friendly(g)
        assert [blocks_of(p) for p in parts] == [((0, 1, 2), (3, 4, 5))]

    def test_complete_graph_sizes(self):
        # any split with both blocks of size >= 2 works in a complete graph
        g = dg(5, [[w for w in range(5) if w != v] for v in range(5)])
        parts = enumerate_friendly(g)
        assert len(parts) == 2 ** 4 - 1 - 4 - 1
        for p in parts:
            sizes = sorted(map(len, blocks_of(p)))
            assert sizes[0] >= 2

    def test_complete_graph_r2(self):
        g = dg(6, [[w for w in range(6) if w != v] for v in range(6)])
        parts = enumerate_friendly(g, r=2)
        assert len(parts) == 10
        for p in parts:
            assert sorted(map(len, blocks_of(p))) == [3, 3]

    def test_canonical_order(self):
        g = dg(6, [[w for w in range(6) if w != v] for v in range(6)])
        masks = [p.block1_mask() for p in enumerate_friendly(g)]
        assert masks == sorted(masks)
        assert all(m % 2 == 0 for m in masks)  # vertex 0 pinned to block 0

    def test_cap_enforced(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(CapExceeded):
            enumerate_friendly(g, cap=2)

    @given(digraphs(max_n=7), st.integers(1, 2), st.booleans())
    def test_matches_brute_force(self, g, r, trivial):
        got = [blocks_of(p) for p in enumerate_friendly(g, r=r, include_trivial=trivial)]
        want = oracles.brute_friendly_partitions(g, r=r, include_trivial=trivial)
        assert sorted(got) == sorted(want)

    @settings(max_examples=2, deadline=None)
    @given(regular_out_digraphs(min_n=17, max_n=17, d=3))
    def test_vectorized_path_matches_definition(self, g):
        # n = 17 takes the vectorized route; recheck each partition directly
        # and confirm completeness against a straight scan of all masks
        parts = enumerate_friendly(g)
        got = {p.block1_mask() for p in parts}
        for p in parts:
            assert oracles.brute_is_friendly(g, blocks_of(p), 1)
        masks = g.out_masks
        full = (1 << g.n) - 1
        want = set()
        for t in range(1, 1 << (g.n - 1)):
            m1 = t << 1
            m0 = full ^ m1
            if all(masks[v] & (m1 if m1 >> v & 1 else m0) for v in range(g.n)):
                want.add(m1)
        assert got == want


class TestCanSeparate:
    def test_cycle_vertices_inseparable(self):
        g = dg(5, [[1], [2], [3], [4], [0]])
        assert can_separate(g, (0, 3)) is None

    def test_triangle_inseparable(self):
        g = dg(3, [[1], [2], [0]])
        assert can_separate(g, (0, 1)) is None
        assert can_separate(g, (0, 1, 2)) is None

    def test_two_triangles_cross_pair(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        p = can_separate(g, (0, 3))
        assert p is not None
        assert p.block[0] != p.block[3]
        assert can_separate(g, (0, 1)) is None

    def test_needs_two_vertices(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError):
            can_separate(g, (1,))

    def test_cap_enforced(self):
        g = dg(4, [[1], [2], [3], [0]])
        with pytest.raises(CapExceeded):
            can_separate(g, (0, 2), cap=3)

    @given(digraphs(min_n=2, max_n=7), st.data())
    def test_matches_brute_force(self, g, data):
        u = data.draw(st.integers(0, g.n - 1))
        v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
        got = can_separate(g, (u, v))
        want = oracles.brute_can_separate(g, (u, v))
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert got.block[u] != got.block[v]
            assert oracles.brute_is_friendly(g, blocks_of(got), 1)

    @given(regular_out_digraphs(min_n=5, max_n=7, d=3), st.data())
    def test_matches_brute_force_r2(self, g, data):
        u = data.draw(st.integers(0, g.n - 1))
        v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
        got = can_separate(g, (u, v), r=2)
        want = oracles.brute_can_separate(g, (u, v), r=2)
        assert (got is None) == (want is None)
        if got is not None:
            assert oracles.brute_is_friendly(g, blocks_of(got), 2)


class TestExtendFriendlySets:
    def test_grows_two_triangles(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        p = extend_friendly_sets(g, {0, 1, 2}, {3, 4, 5})
        assert blocks_of(p) == ((0, 1, 2), (3, 4, 5))

    def test_pulls_feeders_into_block0(self):
        # 6 feeds triangle {0,1,2}; it must land in block 0
        g = dg(7, [[1], [2], [0], [4], [5], [3], [0, 3]])
        p = extend_friendly_sets(g, (0, 1, 2), (3, 4, 5))
        assert p.block[6] == 0
        assert is_friendly(g, p)

    def test_rejects_overlap(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError, match="overlap"):
            extend_friendly_sets(g, {0, 1}, {1, 2})

    def test_rejects_seed_without_internal_edge(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        with pytest.raises(ValueError, match="vertex 3"):
            extend_friendly_sets(g, {0, 1, 2}, {3})

    def test_rejects_degree_zero(self):
        g = dg(4, [[1], [0], [3], []])
        with pytest.raises(ValueError, match="out-degree 0"):
            extend_friendly_sets(g, {0, 1}, {2, 3})


class TestSeparationReport:
    def test_two_triangles(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        rep = separation_report(g)
        assert rep.partition_count == 1
        assert rep.total_with_trivial == 2
        assert rep.classes == ((0, 1, 2), (3, 4, 5))
        assert rep.codes[0] == "0" and rep.codes[3] == "1"

    def test_cycle_single_class(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        rep = separation_report(g)
        assert rep.partition_count == 0
        assert rep.total_with_trivial == 1
        assert rep.classes == ((0, 1, 2, 3, 4, 5),)

    def test_trivial_not_counted_without_min_degree(self):
        g = dg(3, [[1], [2], []])
        rep = separation_report(g)
        assert rep.total_with_trivial == rep.partition_count == 0

    @given(digraphs(max_n=7), st.integers(1, 2))
    def test_classes_match_brute_force(self, g, r):
        rep = separation_report(g, r=r)
        assert sorted(rep.classes) == oracles.brute_classes(g, r)
        assert rep.partition_count == len(oracles.brute_friendly_partitions(g, r))

    def test_wide_code_path(self):
        # complete graph on 14 vertices has 8177 canonical friendly
        # partitions, exercising the vectorized membership-code route
        n = 14
        g = dg(n, [[w for w in range(n) if w != v] for v in range(n)])
        rep = separation_report(g)
        assert rep.partition_count == 2 ** 13 - 15
        assert len(rep.classes) == n  # complete graphs separate everything
        assert all(len(c) == 1 for c in rep.classes)
        assert len(set(rep.codes)) == n


class TestExhaustiveGeneration:
    def test_count_formula(self):
        assert count_out_degree_exact_digraphs(4, 3) == 1
        assert count_out_degree_exact_digraphs(5, 3) == 4 ** 5
        assert count_out_degree_exact_digraphs(6, 1) == 5 ** 6

    def test_unique_complete_graph(self):
        gs = list(iter_out_degree_exact_digraphs(4, 3))
        assert len(gs) == 1
        assert gs[0] == dg(4, [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]])

    def test_enumeration_is_exact_and_distinct(self):
        gs = list(iter_out_degree_exact_digraphs(4, 2))
        assert len(gs) == count_out_degree_exact_digraphs(4, 2) == 81
        assert len(set(gs)) == 81
        for g in gs:
            assert all(len(row) == 2 for row in g.out_adj)

    def test_infeasible_degree(self):
        with pytest.raises(ValueError):
            next(iter_out_degree_exact_digraphs(3, 3))
