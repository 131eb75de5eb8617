from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustercodes.errors import ParamError
from clustercodes.topology import (ClusterTopology, NodeId, contact_sets,
                                   contact_vectors, incidence_matrix, node_flat,
                                   node_pair, nodes_realizing, omega_star)

from oracles import majorizes

# K_6 incidence under lexicographic edge order, written out long-hand
V6 = [
    [1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0, 1, 1],
]


def test_incidence_t3():
    assert incidence_matrix(3).data == [[1, 1, 0], [1, 0, 1], [0, 1, 1]]


def test_incidence_t6_matches_printed_matrix():
    assert incidence_matrix(6).data == V6


def test_incidence_t2_single_edge():
    assert incidence_matrix(2).data == [[1], [1]]


def test_incidence_small_t_rejected():
    with pytest.raises(ParamError):
        incidence_matrix(1)


@pytest.mark.parametrize("t", range(2, 13))
def test_incidence_matrix_clauses(t):
    m = incidence_matrix(t)
    assert m.cols == comb(t, 2)
    assert all(x in (0, 1) for row in m.data for x in row)
    assert all(sum(row) == t - 1 for row in m.data)
    assert all(sum(m.data[i][c] for i in range(t)) == 2 for c in range(m.cols))
    for a, b in combinations(range(t), 2):
        common = sum(1 for c in range(m.cols) if m.data[a][c] and m.data[b][c])
        assert common == 1


def test_node_flat_example():
    top = ClusterTopology(12, 6, 3)
    assert node_flat(NodeId(2, 3), top) == 7
    assert node_pair(1, top) == NodeId(1, 1)


def test_node_roundtrip_exhaustive():
    top = ClusterTopology(12, 6, 3)
    for u in range(1, 13):
        assert node_flat(node_pair(u, top), top) == u
    for node in top.nodes():
        assert node_pair(node_flat(node, top), top) == node


def test_node_out_of_range():
    top = ClusterTopology(12, 6, 3)
    with pytest.raises(ParamError):
        node_flat(NodeId(4, 1), top)
    with pytest.raises(ParamError):
        node_pair(13, top)


def test_topology_validation():
    with pytest.raises(ParamError):
        ClusterTopology(12, 6, 5)  # 5 does not divide 12
    with pytest.raises(ParamError):
        ClusterTopology(12, 0, 3)
    with pytest.raises(ParamError):
        ClusterTopology(12, 13, 3)


def test_contact_vectors_count_vs_bruteforce():
    top = ClusterTopology(12, 6, 3)
    got = contact_vectors(top)
    brute = [w for w in product(range(top.n_I + 1), repeat=top.L) if sum(w) == 6]
    assert got == sorted(brute)
    assert len(got) == 19


def test_contact_vectors_degenerate():
    assert contact_vectors(ClusterTopology(8, 8, 2)) == [(4, 4)]
    assert contact_vectors(ClusterTopology(8, 5, 1)) == [(5,)]


def test_omega_star_examples():
    assert omega_star(ClusterTopology(12, 6, 3)) == (4, 2, 0)
    assert omega_star(ClusterTopology(12, 4, 3)) == (4, 0, 0)


def test_omega_star_majorizes_everything():
    for n in range(2, 13):
        for L in range(1, n + 1):
            if n % L:
                continue
            for k in range(1, n + 1):
                top = ClusterTopology(n, k, L)
                star = omega_star(top)
                assert sum(star) == k
                for omega in contact_vectors(top):
                    assert majorizes(star, omega)


def test_nodes_realizing():
    top = ClusterTopology(12, 6, 3)
    assert nodes_realizing(top, (4, 2, 0)) == (
        [NodeId(1, j) for j in (1, 2, 3, 4)] + [NodeId(2, 1), NodeId(2, 2)]
    )
    variant = nodes_realizing(top, (0, 2, 4), variant=2)
    assert len(set(variant)) == 6
    with pytest.raises(ParamError):
        nodes_realizing(top, (6, 0, 0))


def test_contact_sets_exhaustive_small():
    top = ClusterTopology(6, 3, 2)
    sets = contact_sets(top)
    assert len(sets) == comb(6, 3)
    assert all(len(s) == 3 for s in sets)


def test_contact_sets_sampled_large():
    top = ClusterTopology(16, 8, 4)  # C(16,8) = 12870 > 10^4
    sets = contact_sets(top, seed=5)
    assert sets == contact_sets(top, seed=5)  # deterministic
    assert len(sets) <= 1000 + top.L
    assert all(len(s) == len(set(s)) == 8 for s in sets)
    heavy = tuple(range(4)) + (4, 5, 6, 7)
    assert tuple(sorted(heavy)) in sets


@given(st.integers(2, 12), st.data())
def test_omega_star_prefix_sums_dominate(n, data):
    ls = [l for l in range(1, n + 1) if n % l == 0]
    top = ClusterTopology(n, data.draw(st.integers(1, n)), data.draw(st.sampled_from(ls)))
    star = omega_star(top)
    for omega in contact_vectors(top):
        assert majorizes(star, omega)
