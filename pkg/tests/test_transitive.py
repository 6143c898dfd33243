"""Automorphisms, vertex-transitive class structure, and class contraction."""

import pytest

from amity import (
    CapExceeded,
    MatchingError,
    Partition,
    PreconditionError,
    check_class_structure,
    enumerate_friendly,
    hall_matching_contract,
    is_friendly,
    prime_separability,
    quotient,
    rotation_automorphisms,
    singleton_walk,
)
from amity.io import generate
from amity.transitive import (
    AUTOMORPHISM_CAP,
    automorphisms,
    find_automorphism_mapping,
    is_vertex_transitive,
    make_automorphism_set,
    verify_automorphism,
)
from oracles import dg


def circulant(n, offsets):
    return generate("circulant", (n, tuple(offsets)), 0)


def complete(n):
    return dg(n, [[w for w in range(n) if w != v] for v in range(n)])


class TestAutomorphisms:
    def test_verify_rejects_non_permutation(self):
        g = dg(3, [[1], [2], [0]])
        assert not verify_automorphism(g, (0, 0, 1))

    def test_verify_accepts_rotation(self):
        g = dg(3, [[1], [2], [0]])
        assert verify_automorphism(g, (1, 2, 0))
        assert not verify_automorphism(g, (1, 0, 2))

    def test_rotations_of_circulant(self):
        g = circulant(7, (1, 2, 3))
        auts = rotation_automorphisms(g)
        assert len(auts.perms) == 7
        assert auts.transitive

    def test_rotations_of_irregular_graph(self):
        g = dg(3, [[1, 2], [2], [0]])
        auts = rotation_automorphisms(g)
        assert [p for p in auts.perms] == [(0, 1, 2)]
        assert not auts.transitive

    def test_full_search_on_complete_graph(self):
        auts = automorphisms(complete(4))
        assert len(auts.perms) == 24
        assert auts.transitive

    def test_search_cap(self):
        g = dg(13, [[(v + 1) % 13] for v in range(13)])
        with pytest.raises(CapExceeded):
            automorphisms(g)
        assert AUTOMORPHISM_CAP == 12

    def test_make_set_validates(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError):
            make_automorphism_set(g, [(1, 0, 2)])

    def test_mapping_search(self):
        g = circulant(5, (1, 2))
        perm = find_automorphism_mapping(g, 0, 3)
        assert perm is not None and perm[0] == 3
        assert verify_automorphism(g, perm)

    def test_mapping_absent(self):
        g = dg(3, [[1, 2], [2], [0]])
        assert find_automorphism_mapping(g, 0, 1) is None

    def test_is_vertex_transitive(self):
        assert is_vertex_transitive(circulant(6, (1, 3)))
        assert is_vertex_transitive(complete(4))
        assert not is_vertex_transitive(dg(3, [[1, 2], [2], [0]]))


class TestClassStructure:
    def test_prime_circulant_all_singletons(self):
        g = circulant(7, (1, 2, 3))
        v = check_class_structure(g)
        assert v.ok
        assert v.degree == 3
        assert v.independence_ok and v.size_uniform_ok and v.spread_ok
        assert all(len(c) == 1 for c in v.classes)
        assert v.violations == () and v.dumps == ()

    def test_degree_two_leaves_spread_open(self):
        # min out-degree 2 sits outside the three-class spread claim; this
        # instance also has edges inside its classes, so the independence
        # check must fire and produce a replayable dump
        g = circulant(6, (1, 3))
        v = check_class_structure(g)
        assert v.classes == ((0, 3), (1, 4), (2, 5))
        assert v.spread_ok is None
        assert not v.independence_ok
        assert v.size_uniform_ok
        assert not v.ok
        assert len(v.dumps) == 1
        assert "class-independence" in v.dumps[0]

    def test_requires_transitivity(self):
        g = dg(3, [[1, 2], [2], [0]])
        with pytest.raises(PreconditionError):
            check_class_structure(g)

    def test_supplied_evidence_is_checked(self):
        from amity.transitive import AutomorphismSet

        g = circulant(7, (1, 2, 3))
        forged = AutomorphismSet(perms=((1, 0, 2, 3, 4, 5, 6),), transitive=True)
        with pytest.raises(ValueError, match="not an automorphism"):
            check_class_structure(g, auts=forged)

    def test_supplied_evidence_shortcut(self):
        g = circulant(7, (1, 2, 3))
        auts = rotation_automorphisms(g)
        assert check_class_structure(g, auts=auts).ok

    def test_nontransitive_evidence_rejected(self):
        g = circulant(7, (1, 2, 3))
        idonly = make_automorphism_set(g, [tuple(range(7))])
        assert not idonly.transitive
        with pytest.raises(PreconditionError):
            check_class_structure(g, auts=idonly)


class TestPrimeSeparability:
    def test_prime_circulants(self):
        for n in (5, 7, 11):
            g = circulant(n, (1, 2, 3)) if n > 5 else complete(5)
            verdict = prime_separability(g)
            assert verdict.ok
            assert verdict.class_sizes == (1,) * n
            assert verdict.dump is None

    def test_rejects_composite_order(self):
        with pytest.raises(PreconditionError, match="prime"):
            prime_separability(circulant(6, (1, 2, 3)))

    def test_rejects_low_degree(self):
        with pytest.raises(PreconditionError, match="out-degree"):
            prime_separability(circulant(7, (1, 2)))


class TestSingletonWalk:
    def test_walk_finds_movable_vertex(self):
        g = circulant(7, (1, 2, 3))
        p = enumerate_friendly(g)[0]
        assert p.block_vertices(1) == (1, 2, 5)
        w = singleton_walk(g, p, 3)
        assert w == 6
        moved = list(p.block)
        moved[w] = 1
        assert is_friendly(g, Partition(moved))

    def test_walk_result_movable_across_partitions(self):
        g = circulant(7, (1, 2, 3))
        checked = 0
        for p in enumerate_friendly(g):
            m1 = p.block1_mask()
            m0 = ((1 << g.n) - 1) ^ m1
            for v0 in p.block_vertices(0):
                if (g.out_masks[v0] & m0).bit_count() >= 2 and g.out_masks[v0] & m1:
                    w = singleton_walk(g, p, v0)
                    assert w is not None
                    moved = list(p.block)
                    moved[w] = 1
                    assert is_friendly(g, Partition(moved))
                    checked += 1
        assert checked > 10

    def test_rejects_unfriendly_partition(self):
        g = circulant(6, (1, 3))
        with pytest.raises(ValueError, match="not friendly"):
            singleton_walk(g, Partition([0, 1, 0, 1, 0, 1]), 0)

    def test_rejects_wrong_block(self):
        g = circulant(7, (1, 2, 3))
        p = enumerate_friendly(g)[0]
        with pytest.raises(ValueError, match="block 0"):
            singleton_walk(g, p, p.block_vertices(1)[0])

    def test_rejects_thin_start(self):
        # out-degree 1 vertices can never supply 2 same-block out-neighbors
        g = dg(6, [[1], [2], [0], [4], [5], [3]])
        p = Partition([0, 0, 0, 1, 1, 1])
        with pytest.raises(ValueError, match="2 same-block"):
            singleton_walk(g, p, 0)

    def test_rejects_start_without_cross_edge(self):
        g = dg(6, [[1, 2], [2, 0], [0, 1], [4, 5], [5, 3], [3, 4]])
        p = Partition([0, 0, 0, 1, 1, 1])
        with pytest.raises(ValueError, match="cross-block"):
            singleton_walk(g, p, 0)


class TestQuotient:
    def test_bridged_triangles(self):
        g = dg(6, [[1], [2], [0, 3], [4], [5], [3]])
        q = quotient(g, ((0, 1, 2), (3, 4, 5)))
        assert q.out_adj == ((1,), ())
        assert q.digraph().n == 2

    def test_loops_within_class_dropped(self):
        g = dg(4, [[1], [0], [3], [2]])
        q = quotient(g, ((0, 1), (2, 3)))
        assert q.out_adj == ((), ())

    def test_rejects_non_partition(self):
        g = dg(3, [[1], [2], [0]])
        with pytest.raises(ValueError, match="partition"):
            quotient(g, ((0, 1), (1, 2)))


class TestHallMatchingContract:
    def test_contracts_matched_pairs(self):
        g = complete(4)
        contracted, trace = hall_matching_contract(g, (0, 1), (2, 3))
        assert contracted.n == 2
        assert len(trace.merges) == 2
        merged_into = {u: v for u, v in trace.merges}
        assert set(merged_into) == {0, 1}
        assert set(merged_into.values()) == {2, 3}

    def test_no_matching_raises(self):
        g = dg(6, [[1], [2], [3], [4], [5], [0]])
        with pytest.raises(MatchingError, match="stuck at vertex 0"):
            hall_matching_contract(g, (0,), (3,))

    def test_contention_resolved_by_augmenting(self):
        # both 0 and 1 prefer 4; a saturating matching still exists
        g = dg(6, [[4], [4, 5], [4, 5], [0], [1], [2]])
        contracted, trace = hall_matching_contract(g, (0, 1), (4, 5))
        assert contracted.n == 4
        ls = {l for _, l in trace.merges}
        assert ls == {4, 5}

    def test_two_cycle_contraction_drops_self_loop(self):
        g = dg(2, [[1], [0]])
        contracted, trace = hall_matching_contract(g, (0,), (1,))
        assert contracted.n == 1
        assert contracted.out_adj == ((),)

    def test_rejects_overlapping_classes(self):
        g = complete(4)
        with pytest.raises(ValueError, match="disjoint"):
            hall_matching_contract(g, (0, 1), (1, 2))

    def test_rejects_empty_class(self):
        g = complete(4)
        with pytest.raises(ValueError, match="nonempty"):
            hall_matching_contract(g, (), (1, 2))
