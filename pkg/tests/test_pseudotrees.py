import random
from math import gcd

import pytest

from ellskel import homology
from ellskel.lattices import is_isometric
from ellskel.pseudotrees import (
    SERIES,
    braid_words,
    contract,
    enumerate_marked_trees,
    expected_lattice,
    leaf_distances,
    leaf_order,
    loose_end_count,
    orientation_for_series,
    outer_region,
    pi1_abelianization,
    pi1_for_tree,
    q_lattice_and_chi,
    series_k,
    tree_size,
    tree_to_skeleton,
    verify_series,
)
from ellskel.skeletons import Orientation, genus

from test_skeletons import PSEUDOTREE_K1

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429]


def test_tree_counts():
    for k in range(1, 8):
        trees = enumerate_marked_trees(k)
        assert len(trees) == CATALAN[k - 1]
        assert all(tree_size(t) == k - 1 for t in trees)
        assert len(set(trees)) == len(trees)


def test_k1_skeleton_matches_fixture():
    (tree,) = enumerate_marked_trees(1)
    sk, leaves = tree_to_skeleton(tree)
    assert sk == PSEUDOTREE_K1
    assert len(leaves) == 2
    assert leaves[0].tree_end == 0


def test_skeleton_shape():
    for k in range(1, 6):
        for tree in enumerate_marked_trees(k):
            sk, leaves = tree_to_skeleton(tree)
            assert sk.n_ends == 6 * k
            assert genus(sk) == 0
            assert len(leaves) == k + 1
            assert outer_region(sk).size == 5 * k - 1


def test_leaf_distances_small():
    assert leaf_distances(enumerate_marked_trees(1)[0]) == ((2,), (2,))
    (tree,) = enumerate_marked_trees(2)
    m, n = leaf_distances(tree)
    assert m == (3, 3)
    assert n == (6, 3)


def test_distance_cycle_sum_and_gcd():
    for k in range(1, 7):
        for tree in enumerate_marked_trees(k):
            sk, leaves = tree_to_skeleton(tree)
            ordered, dists = leaf_order(sk, leaves)
            assert len(ordered) == k + 1
            assert sum(dists) == 5 * k - 1
            m, n = leaf_distances(tree)
            assert dists[:-1] == m
            assert n[0] == sum(m)
            if k >= 3:
                g = 0
                for x in m:
                    g = gcd(g, x)
                assert g == 1


def test_figure_distance_vector_occurs():
    vecs = {leaf_distances(t)[0] for t in enumerate_marked_trees(5)}
    assert (5, 3, 4, 5, 3) in vecs


def test_loose_end_parity():
    for k in range(1, 7):
        for tree in enumerate_marked_trees(k):
            assert loose_end_count(tree) % 2 == (k + 1) % 2


def test_q_lattice():
    (tree,) = enumerate_marked_trees(2)
    Q, chi = q_lattice_and_chi(tree)
    assert Q.gram == ((1, 1), (1, 1))
    assert chi == [3, 3]


def test_contraction_reaches_w():
    for k in range(1, 9):
        for tree in enumerate_marked_trees(k):
            U, chi_bar, psi_bar = contract(tree)  # asserts U^t G U = W_k
            # the isotropic generator is the last coordinate
            if k % 2 == 0:
                s = k // 2
                assert chi_bar[-1] == 0
                assert sorted(abs(c) for c in chi_bar[:-1]) == [1] * (s - 1) + [3] * s
                assert abs(psi_bar[-1]) == 2
            else:
                s = (k + 1) // 2
                assert abs(chi_bar[-1]) == 2
                assert sorted(abs(c) for c in chi_bar[:-1]) == [1] * (s - 1) + [3] * (
                    s - 1
                )
                assert psi_bar[-1] == 0
                assert sorted(abs(c) for c in psi_bar[:-1]) == [1] * (s - 1) + [3] * (
                    s - 1
                )


def test_expected_lattice_determinants():
    for s in (2, 3):
        assert expected_lattice("th1.1", s).det() == 10 * s - 1
        assert expected_lattice("th1.2", s).det() == 4
        assert expected_lattice("th1.3", s).det() == 16
        assert expected_lattice("th1.4", s).det() == 4 * (10 * s - 6)
    assert expected_lattice("th1.1", 1).rank == 0
    assert expected_lattice("th1.4", 1).rank == 0
    assert expected_lattice("th1.2", 1).rank == 0
    assert expected_lattice("th1.3", 1).det() == 16


@pytest.mark.parametrize("series", SERIES)
@pytest.mark.parametrize("s", [1, 2])
def test_verify_series_small(series, s):
    report = verify_series(series, s)
    assert report.ok
    expected_order = {"th1.1": 3, "th1.2": 2, "th1.3": 1, "th1.4": 4}[series]
    for _, _, mw, _ in report.results:
        assert mw.order == (expected_order if s == 1 else 1)


def test_tree_edge_orientation_is_irrelevant():
    rng = random.Random(71)
    for tree in enumerate_marked_trees(3):
        sk, leaves = tree_to_skeleton(tree)
        loop_ends = {lf.loop_tail for lf in leaves} | {lf.loop_head for lf in leaves}
        for series in ("th1.2", "th1.4"):
            o = orientation_for_series(sk, leaves, series)
            T0 = homology.transcendental_lattice(sk, o)
            mw0 = homology.mordell_weil(sk, o)
            heads = list(o.heads)
            for i, (a, b) in enumerate(sk.edges):
                if a not in loop_ends and rng.random() < 0.5:
                    heads[i] = a + b - heads[i]
            o2 = Orientation(tuple(heads))
            assert is_isometric(T0, homology.transcendental_lattice(sk, o2))
            assert homology.mordell_weil(sk, o2) == mw0


def test_braid_words_shape():
    (tree,) = enumerate_marked_trees(2)
    words, n, eps, exponent = braid_words(tree, "th1.1")
    assert n == [6, 3]
    assert eps == 0
    assert exponent == 2
    assert len(words) == 3
    assert words[0] == [1] * 6 + [2] + [-1] * 6
    assert words[2] == [2]
    words, _, eps, exponent = braid_words(tree, "th1.3")
    assert eps == 1
    assert exponent == 4
    assert words[2] == [2, 1, 2, 1, 2, 1, 2]


def test_pi1_k2_is_z6():
    (tree,) = enumerate_marked_trees(2)
    inv = pi1_for_tree(tree, "th1.1")
    assert inv.free_rank == 0
    assert inv.torsion == (6,)


def test_pi1_series_cyclic():
    for series in SERIES:
        for s in (2, 3):
            k = series_k(series, s)
            for tree in enumerate_marked_trees(k):
                inv = pi1_for_tree(tree, series)
                assert inv.free_rank == 0
                assert len(inv.torsion) <= 1


def test_pi1_abelianization_no_relations():
    inv = pi1_abelianization([], 0)
    assert inv.free_rank == 3
    assert inv.torsion == ()
