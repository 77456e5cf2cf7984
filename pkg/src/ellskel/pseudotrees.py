"""Pseudo-trees: loop-decorated admissible trees and their lattice series.

A marked admissible tree (every vertex of valency 3 or 1, a chosen first
leaf) is encoded as a rooted binary tree with k-1 nodes; attaching a loop
at every leaf yields a genus-0 skeleton with 2k vertices, k+1 monogons
and one outer region.  This module enumerates the trees, builds the
skeletons, measures leaf distances, realizes the distance lattice Q_T
with its characteristic functional, performs the contraction to W_k, and
packages the four closed-form series (expected lattices, orientations,
braid words, abelianized fundamental groups).

Binary trees are nested pairs: a node is (left, right) where each slot is
another node or None (a missing branch, i.e. a leaf of the admissible
tree); the whole tree is None when k = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import homology
from .exact import cokernel_invariants, mat_mul, transpose, zeros
from .lattices import (
    IntLattice,
    congruence_sublattice,
    is_isometric,
    modified_form,
    orthogonal_complement,
    standard_lattice,
)
from .skeletons import Orientation, Skeleton, fiber_types, genus, regions


def enumerate_marked_trees(k):
    """All rooted binary trees with k-1 nodes, in deterministic order."""
    if k < 1:
        raise ValueError("k must be >= 1")

    def gen(n):
        if n == 0:
            yield None
            return
        for i in range(n):
            for left in gen(i):
                for right in gen(n - 1 - i):
                    yield (left, right)

    return list(gen(k - 1))


def tree_size(tree):
    """Number of binary-tree nodes; the admissible tree has 2(k) vertices."""
    if tree is None:
        return 0
    return 1 + tree_size(tree[0]) + tree_size(tree[1])


@dataclass(frozen=True)
class Leaf:
    tree_end: int  # the end on the admissible tree
    loop_tail: int  # nx(tree_end), tail of the loop in the stable convention
    loop_head: int  # nx(loop_tail)


def tree_to_skeleton(tree):
    """Skeleton of the pseudo-tree, plus its leaves in construction order.

    End layout per vertex: three consecutive indices forming an nx cycle.
    The first leaf created is the marked leaf v1 (ends 0, 1, 2).
    """
    nx_pairs = []
    op_pairs = []
    leaves = []
    counter = [0]

    def fresh3():
        e = counter[0]
        counter[0] += 3
        nx_pairs.extend([(e, e + 1), (e + 1, e + 2), (e + 2, e)])
        return e, e + 1, e + 2

    def make_leaf():
        t, l1, l2 = fresh3()
        op_pairs.append((l1, l2))
        leaves.append(Leaf(t, l1, l2))
        return t

    def make(node):
        if node is None:
            return make_leaf()
        p, lft, rgt = fresh3()
        op_pairs.append((lft, make(node[0])))
        op_pairs.append((rgt, make(node[1])))
        return p

    root_leaf = make_leaf()
    op_pairs.append((root_leaf, make(tree)))
    n = counter[0]
    nx = [0] * n
    for a, b in nx_pairs:
        nx[a] = b
    op = [0] * n
    for a, b in op_pairs:
        op[a] = b
        op[b] = a
    sk = Skeleton(n, tuple(op), tuple(nx))
    sk.validate()
    assert genus(sk) == 0
    return sk, leaves


def outer_region(sk):
    outer = [r for r in regions(sk) if r.size > 1]
    assert len(outer) == 1
    return outer[0]


def leaf_order(sk, leaves):
    """Leaves in boundary order v1..v_{k+1}, with m_i measured on the walk.

    Walking the outer region, each leaf appears as the adjacent pair
    (loop_head, tree_end); the vertex distance m_i counts the ends visited
    from the tree_end of v_i up to the loop_head of v_{i+1}, inclusive.
    """
    cycle = outer_region(sk).cycle
    pos = {e: i for i, e in enumerate(cycle)}
    N = len(cycle)
    for lf in leaves:
        assert pos[lf.tree_end] == (pos[lf.loop_head] + 1) % N
    first = next(lf for lf in leaves if lf.tree_end == 0)
    ordered = sorted(
        leaves, key=lambda lf: (pos[lf.tree_end] - pos[first.tree_end]) % N
    )
    dists = []
    for a, b in zip(ordered, ordered[1:] + ordered[:1]):
        dists.append((pos[b.loop_head] - pos[a.tree_end]) % N + 1)
    assert sum(dists) == N
    return ordered, tuple(dists)


def leaf_distances(tree):
    """(m_1..m_k) and the suffix sums (n_1..n_k)."""
    sk, leaves = tree_to_skeleton(tree)
    _, dists = leaf_order(sk, leaves)
    m = dists[:-1]  # drop the closing distance v_{k+1} -> v_1
    n = []
    acc = 0
    for x in reversed(m):
        acc += x
        n.append(acc)
    return m, tuple(reversed(n))


def q_lattice_and_chi(tree):
    """The distance lattice Q_T and the functional chi = sum m_i q_i*."""
    m, _ = leaf_distances(tree)
    k = len(m)
    G = zeros(k, k)
    for i in range(k):
        G[i][i] = m[i] - 2
        if i + 1 < k:
            G[i][i + 1] = G[i + 1][i] = 1
    return IntLattice(G), list(m)


class ContractionError(RuntimeError):
    pass


def contract(tree):
    """Unimodular U with U^t Gram(Q_T) U = Gram(W_k), toward the last leaf.

    Returns (U, chi_bar, psi_bar): the images of chi and psi = chi - 2q_k*
    in the W_k* coordinates given by the columns of U.
    """
    Q, m = q_lattice_and_chi(tree)
    k = Q.rank
    # flip even generators so consecutive products become -1
    vecs = []
    for i in range(k):
        v = [0] * k
        v[i] = -1 if (i + 1) % 2 == 0 else 1
        vecs.append(v)
    weights = [mi - 2 for mi in m]
    split = []
    while len(weights) > 1:
        i = next(
            (j for j in range(len(weights) - 1) if weights[j] == 1), None
        )
        if i is None:
            raise ContractionError("no removable leaf pair before the last")
        g = vecs[i]
        if i > 0:
            vecs[i - 1] = [a + b for a, b in zip(vecs[i - 1], g)]
            weights[i - 1] -= 1
        if i + 1 < len(weights):
            vecs[i + 1] = [a + b for a, b in zip(vecs[i + 1], g)]
            weights[i + 1] -= 1
        split.append(g)
        del vecs[i]
        del weights[i]
    if weights != [0]:
        raise ContractionError(f"terminal weight {weights} != 0")
    U = transpose(split + vecs)
    W = standard_lattice("W", k)
    got = mat_mul(transpose(U), mat_mul(Q.gram_rows(), U))
    assert got == W.gram_rows(), "contraction did not reach W_k"
    chi = m
    psi = list(m)
    psi[k - 1] -= 2
    chi_bar = [sum(c * u for c, u in zip(chi, col)) for col in split + vecs]
    psi_bar = [sum(c * u for c, u in zip(psi, col)) for col in split + vecs]
    return U, tuple(chi_bar), tuple(psi_bar)


# ---------------------------------------------------------------------------
# the four series

SERIES = ("th1.1", "th1.2", "th1.3", "th1.4")


def series_k(series, s):
    if series in ("th1.1", "th1.3"):
        return 2 * s
    return 2 * s - 1


def series_has_D5(series):
    return series in ("th1.3", "th1.4")


def orientation_for_series(sk, leaves, series):
    """Loop heads making every loop fiber stable; for the D5 series the
    loop at the last leaf is reversed.  Tree edges take the default head."""
    ordered, _ = leaf_order(sk, leaves)
    flip = {ordered[-1]} if series_has_D5(series) else set()
    head_of = {}
    for lf in leaves:
        lo = (lf.loop_tail, lf.loop_head) if lf.loop_tail < lf.loop_head else (
            lf.loop_head, lf.loop_tail)
        head_of[lo] = lf.loop_tail if lf in flip else lf.loop_head
    heads = []
    for a, b in sk.edges:
        heads.append(head_of.get((a, b), a))
    return Orientation(tuple(heads))


def expected_lattice(series, s):
    """The closed-form transcendental lattice of each series."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if series == "th1.1":
        f = [3] * s + [1] * (s - 1)
        if len(f) == 1:
            # rank-1 ambient, complement of (3) is 0
            return IntLattice([], "T(th1.1,s=1)")
        return orthogonal_complement(standard_lattice("V", 2 * s - 1), f)
    if series == "th1.2":
        return standard_lattice("D", 2 * s - 2)
    if series == "th1.3":
        return standard_lattice("D", 2 * s - 1).direct_sum(IntLattice([[4]]))
    if series == "th1.4":
        n = 2 * s - 2
        f = [3] * (s - 1) + [1] * (s - 1)
        if n == 0:
            return IntLattice([], "T(th1.4,s=1)")
        V = modified_form(standard_lattice("V", n), f, Fraction(1, 4))
        return congruence_sublattice(V, f, 4)
    raise ValueError(f"unknown series {series!r}")


def expected_fiber_names(series, s):
    k = series_k(series, s)
    if series == "th1.1":
        return sorted([f"A~{5 * k - 2}"] + ["A~0*"] * (k + 1))
    if series == "th1.2":
        return sorted([f"D~{5 * k + 3}"] + ["A~0*"] * (k + 1))
    if series == "th1.3":
        return sorted([f"D~{5 * k + 3}", "D~5"] + ["A~0*"] * k)
    return sorted([f"A~{5 * k - 2}", "D~5"] + ["A~0*"] * k)


def fiber_lattice_det(sk, orientation):
    """Product of the root-lattice determinants of all singular fibers."""
    types, _, _ = fiber_types(sk, orientation)
    d = 1
    for ft in types.values():
        L = ft.root_lattice()
        if L.rank:
            d *= L.det()
    return d


@dataclass(frozen=True)
class SeriesReport:
    series: str
    s: int
    results: tuple  # (tree index, lattice_ok, mw, mw_ok) per tree

    @property
    def ok(self):
        return all(l and m for _, l, _, m in self.results)


def verify_series(series, s):
    """Check T_X and MW for every marked tree of the series at level s.

    The lattice must match the closed form in every case.  The section
    group is trivial whenever the fiber lattice and T_X have equal
    determinants; otherwise its order is forced by the index of the fiber
    lattice in the unimodular ambient lattice (this happens only at s=1).
    """
    k = series_k(series, s)
    expect = expected_lattice(series, s)
    results = []
    for idx, tree in enumerate(enumerate_marked_trees(k)):
        sk, leaves = tree_to_skeleton(tree)
        o = orientation_for_series(sk, leaves, series)
        types, _, _ = fiber_types(sk, o)
        assert sorted(ft.name for ft in types.values()) == expected_fiber_names(
            series, s
        )
        T = homology.transcendental_lattice(sk, o)
        lattice_ok = is_isometric(T, expect)
        mw = homology.mordell_weil(sk, o)
        det_T = T.det() if T.rank else 1
        det_S = fiber_lattice_det(sk, o)
        index_sq, order = det_S // det_T, 1
        while order * order < index_sq:
            order += 1
        assert order * order == index_sq, (det_S, det_T)
        mw_ok = (mw.order == order) and (order == 1 or s == 1)
        results.append((idx, lattice_ok, mw, mw_ok))
    return SeriesReport(series, s, tuple(results))


# ---------------------------------------------------------------------------
# braid monodromy and abelianized fundamental groups

S1, S2 = 1, 2  # Artin generators; negative value = inverse


def braid_words(tree, series):
    """Monodromy words m_1..m_{k+1}, the n_i, eps, and the exponent k+t."""
    m, n = leaf_distances(tree)
    k = len(m)
    eps = 1 if series_has_D5(series) else 0
    words = []
    for ni in n:
        words.append([S1] * ni + [S2] + [-S1] * ni)
    words.append([S2] + [S1, S2] * (3 * eps))
    t = {"th1.1": 0, "th1.2": 1, "th1.3": 2, "th1.4": 1}[series]
    return words, list(n), eps, k + t


# abelianized Artin action: each generator conjugates one free generator
# into another, so the induced map on Z^3 is a transposition
_AB = {
    S1: ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    S2: ((1, 0, 0), (0, 0, 1), (0, 1, 0)),
}


def _ab_action(word):
    out = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for g in word:
        out = mat_mul([list(r) for r in _AB[abs(g)]], out)
    return out


def pi1_abelianization(words, exponent):
    """Invariants of Z^3 modulo the abelianized braid relations."""
    rows = []
    for w in words:
        M = _ab_action(w)
        for j in range(3):
            rows.append([M[i][j] - (1 if i == j else 0) for i in range(3)])
    rows.append([exponent] * 3)
    return cokernel_invariants(rows)


def pi1_for_tree(tree, series):
    words, _, _, exponent = braid_words(tree, series)
    return pi1_abelianization(words, exponent)


def loose_end_count(tree):
    """Leaves sharing their node with an even number of other leaves."""
    sk, leaves = tree_to_skeleton(tree)
    if len(leaves) == 2:  # k = 1: two leaves joined by an edge, no nodes
        return 0
    node_of = {}
    for lf in leaves:
        node_of[lf] = sk.vertex_of(sk.op[lf.tree_end])
    count = 0
    for lf in leaves:
        siblings = sum(
            1 for other in leaves if other is not lf
            and node_of[other] == node_of[lf]
        )
        if siblings % 2 == 0:
            count += 1
    return count
