"""Edge contraction, compression, and disjoint / intersecting cycle search."""

import pytest
from hypothesis import given, settings

import oracles
from amity import (
    Partition,
    compress,
    decompress_partition,
    find_disjoint_cycles,
    find_intersecting_pair_plus_disjoint,
    find_two_intersecting_cycles,
    is_dominated,
    is_friendly,
)
from amity.cycles import (
    DISJOINT_CYCLE_DEGREE_GUARANTEE,
    THREE_DISJOINT_CYCLE_DEGREE,
    in_neighborhood_cycle,
    iter_cycles,
)
from amity.digraph import (
    RELATION_ALL_DISJOINT,
    RELATION_FIRST_TWO_INTERSECT,
    min_out_degree,
    verify_cycle_set,
)
from conftest import digraphs, regular_out_digraphs
from oracles import dg


def complete(n):
    return dg(n, [[w for w in range(n) if w != v] for v in range(n)])


class TestDomination:
    def test_shared_in_neighbor(self):
        # 2 sends edges to both ends of 0->1
        g = dg(3, [[1], [], [0, 1]])
        assert is_dominated(g, 0, 1)

    def test_no_shared_in_neighbor(self):
        g = dg(3, [[1], [2], [0]])
        assert not is_dominated(g, 0, 1)

    def test_complete_graph_all_dominated(self):
        g = complete(4)
        for u, v in g.edges():
            assert is_dominated(g, u, v)

    def test_rejects_non_edge(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError, match="not an edge"):
            is_dominated(g, 0, 2)


class TestCompress:
    def test_cycle_collapses_to_two_vertices(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        comp, trace = compress(g)
        assert comp.n == 2
        assert len(trace.merges) == 4
        assert set(comp.edges()) == {(0, 1), (1, 0)}

    def test_complete_graph_incompressible(self):
        g = complete(4)
        comp, trace = compress(g)
        assert comp == g
        assert trace.merges == ()

    def test_two_cycle_incompressible(self):
        g = dg(2, [[1], [0]])
        comp, trace = compress(g)
        assert comp.n == 2 and trace.merges == ()

    def test_trace_bookkeeping(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        comp, trace = compress(g)
        assert trace.original_n == 6
        assert trace.compressed_n == comp.n == len(trace.roots)
        assert sorted(v for group in trace.preimages() for v in group) == list(range(6))
        for c, root in enumerate(trace.roots):
            assert trace.final_map[root] == c

    @given(digraphs(min_n=1))
    def test_min_out_degree_preserved(self, g):
        comp, _ = compress(g)
        assert min_out_degree(comp) == min_out_degree(g)

    @given(digraphs(min_n=1))
    def test_result_is_incompressible(self, g):
        comp, _ = compress(g)
        for u, v in comp.edges():
            assert is_dominated(comp, u, v) or comp.has_edge(v, u)

    @given(digraphs(min_n=2))
    def test_friendly_partitions_lift(self, g):
        # any friendly split of the compressed digraph must pull back to a
        # friendly split of the original
        comp, trace = compress(g)
        if comp.n < 2 or comp.n > 10:
            return
        for blocks in oracles.brute_friendly_partitions(comp):
            p = Partition(
                tuple(1 if v in set(blocks[1]) else 0 for v in range(comp.n))
            )
            lifted = decompress_partition(trace, p)
            assert is_friendly(g, lifted)

    def test_decompress_rejects_size_mismatch(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        _, trace = compress(g)
        with pytest.raises(ValueError):
            decompress_partition(trace, Partition([0, 1, 0]))


class TestInNeighborhoodCycle:
    def test_rejects_uncompressed(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        with pytest.raises(ValueError, match="not compressed"):
            in_neighborhood_cycle(g, 0)

    def test_rejects_two_cycle_vertex(self):
        g = complete(4)
        with pytest.raises(ValueError, match="2-cycle"):
            in_neighborhood_cycle(g, 0)

    def test_finds_cycle_in_dominated_cubic(self):
        from amity import fully_dominated_cubic

        g, _ = fully_dominated_cubic("right")
        for v in range(g.n):
            cyc = in_neighborhood_cycle(g, v)
            assert set(cyc) <= set(g.in_adj[v])
            for i, a in enumerate(cyc):
                assert g.has_edge(a, cyc[(i + 1) % len(cyc)])


class TestIterCycles:
    def test_orders_by_length(self):
        g = complete(4)
        lens = [len(c) for c in iter_cycles(g)]
        assert lens == sorted(lens)

    def test_max_len_filter(self):
        g = complete(4)
        assert all(len(c) <= 3 for c in iter_cycles(g, max_len=3))

    @given(digraphs(max_n=6))
    def test_matches_networkx(self, g):
        ours = {oracles.canonical_cycle(c) for c in iter_cycles(g)}
        theirs = {c for c in oracles.nx_simple_cycles(g) if len(c) >= 2}
        assert ours == theirs


class TestFindDisjointCycles:
    def test_guarantee_constants(self):
        assert DISJOINT_CYCLE_DEGREE_GUARANTEE == {2: 3, 3: 15}
        assert THREE_DISJOINT_CYCLE_DEGREE == 15

    def test_two_triangles(self):
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        cs = find_disjoint_cycles(g, 2)
        assert cs is not None and cs.relation == RELATION_ALL_DISJOINT
        verify_cycle_set(g, cs)

    def test_complete_5(self):
        g = complete(5)
        assert find_disjoint_cycles(g, 2) is not None
        assert find_disjoint_cycles(g, 3) is None

    def test_single_cycle_has_no_pair(self):
        g = dg(5, [[1], [2], [3], [4], [0]])
        assert find_disjoint_cycles(g, 2) is None

    def test_compression_fallback(self):
        # contracting 0->2 merges the two 2-cycles' support; the packing
        # survives only via the exhaustive fallback on the original
        g = dg(4, [[1, 2], [0], [3], [2]])
        comp, trace = compress(g)
        assert trace.merges  # compression really fires
        cs = find_disjoint_cycles(g, 2)
        assert cs is not None
        verify_cycle_set(g, cs)

    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            find_disjoint_cycles(complete(4), 4)

    @given(digraphs(max_n=7))
    def test_presence_matches_exhaustive(self, g):
        found = find_disjoint_cycles(g, 2)
        assert (found is not None) == oracles.has_k_disjoint_cycles(g, 2)
        if found is not None:
            verify_cycle_set(g, found)

    @settings(max_examples=25)
    @given(regular_out_digraphs(min_n=6, max_n=9, d=3))
    def test_degree_3_guarantee(self, g):
        assert find_disjoint_cycles(g, 2) is not None


class TestIntersectingCycles:
    def test_complete_5_pair(self):
        cs = find_two_intersecting_cycles(complete(5))
        assert cs is not None and cs.relation == RELATION_FIRST_TWO_INTERSECT
        verify_cycle_set(complete(5), cs)

    def test_single_cycle_has_none(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        assert find_two_intersecting_cycles(g) is None

    def test_low_degree_fallback(self):
        # triangle plus a chord path: (0,1,2) and (0,1,3) share an edge but
        # the maximal-family route cannot see it at min out-degree 1
        g = dg(4, [[1], [2, 3], [0], [0]])
        cs = find_two_intersecting_cycles(g)
        assert cs is not None
        verify_cycle_set(g, cs)

    def test_pair_plus_disjoint_on_complete_5(self):
        cs = find_intersecting_pair_plus_disjoint(complete(5))
        assert cs is not None
        assert len(cs.cycles) == 3
        verify_cycle_set(complete(5), cs)

    def test_pair_plus_disjoint_absent_on_triangle(self):
        g = dg(3, [[1], [2], [0]])
        assert find_intersecting_pair_plus_disjoint(g) is None

    def test_pair_plus_disjoint_needs_intersection(self):
        # two disjoint triangles have cycles but no intersecting pair
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        assert find_intersecting_pair_plus_disjoint(g) is None

    @given(digraphs(max_n=6))
    def test_pair_presence_matches_exhaustive(self, g):
        cycles = [set(c) for c in oracles.nx_simple_cycles(g) if len(c) >= 2]
        want = any(
            cycles[i] & cycles[j]
            for i in range(len(cycles))
            for j in range(i + 1, len(cycles))
        )
        got = find_two_intersecting_cycles(g)
        assert (got is not None) == want
        if got is not None:
            verify_cycle_set(g, got)

    @settings(max_examples=20)
    @given(regular_out_digraphs(min_n=5, max_n=8, d=2))
    def test_degree_2_guarantee(self, g):
        assert find_two_intersecting_cycles(g) is not None
