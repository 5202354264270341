"""Tree coverage engine: distance oracle, binarization, spine
decomposition, coverage arrays, and point queries."""

import random
from fractions import Fraction as F

import pytest

from ckoc import oracle
from ckoc.graph_core import (
    EdgePoint,
    Graph,
    InstanceError,
    all_pairs_distances,
    canonical_point,
    point_distance,
    vertex_point,
)
from ckoc.tree_engine import (
    _vertex_side,
    binarize,
    build_coverage_arrays,
    build_distance_oracle,
    query_at_least_k,
    query_count,
    spine_decompose,
)

from conftest import random_tree


def _engine(g, kmax=None, lam=None):
    st = spine_decompose(binarize(g))
    ca = build_coverage_arrays(st, lam, kmax) if lam is not None else None
    return st, ca


def _root_spine_vertices(st):
    # leaves of the topmost search tree, without crossing hanging links
    out = set()
    stack = [st.root]
    while stack:
        u = stack.pop()
        if u.leaf_kind:
            out.add(u.vertex)
        else:
            stack.append(u.left)
            stack.append(u.right)
    return out


# ---------------------------------------------------------------- oracle


def test_distance_oracle_path5(path5):
    to = build_distance_oracle(path5)
    assert to.d(1, 5) == F(4)
    assert to.d(2, 4) == F(2)
    for v in path5.vertices():
        assert to.d(v, v) == 0
    dm = all_pairs_distances(path5)
    for u in path5.vertices():
        for v in path5.vertices():
            assert to.d(u, v) == dm.d(u, v)


def test_distance_oracle_star(star3):
    to = build_distance_oracle(star3)
    assert to.d(2, 3) == F(2)
    assert to.d(1, 4) == F(1)
    assert to.lca(2, 3) == 1


def test_distance_oracle_rejects_nontree(triangle):
    with pytest.raises(InstanceError):
        build_distance_oracle(triangle)


def test_distance_oracle_random_matches_matrix():
    rng = random.Random(710)
    for _ in range(10):
        g = random_tree(rng, rng.randint(2, 20), weighted=rng.random() < 0.5)
        to = build_distance_oracle(g)
        dm = all_pairs_distances(g)
        for u in g.vertices():
            for v in g.vertices():
                assert to.d(u, v) == dm.d(u, v)


# ---------------------------------------------------------------- binarize


def test_binarize_star3(star3):
    bt = binarize(star3)
    assert bt.n_all == 5
    assert bt.parent[5] == 1 and bt.plen[5] == 0
    assert bt.orig[5] == 1 and not bt.marked[5]
    assert bt.weight[5] == star3.weights[1]
    assert bt.children[1] == [2, 5]
    assert bt.children[5] == [3, 4]
    for e in star3.edges:
        leaf = e.v if e.u == 1 else e.u
        assert bt.edge_child[e.id] == leaf


def test_binarize_four_leaf_star():
    g = Graph.unit(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
    bt = binarize(g)
    assert bt.n_all == 7
    assert bt.parent[6] == 1 and bt.parent[7] == 6
    assert bt.plen[6] == 0 and bt.plen[7] == 0
    assert bt.orig[6] == 1 and bt.orig[7] == 1
    assert bt.children[1] == [2, 6]
    assert bt.children[6] == [3, 7]
    assert bt.children[7] == [4, 5]


def test_binarize_path_identity(path5):
    bt = binarize(path5)
    assert bt.n_all == 5
    assert all(bt.children[v] == [v + 1] for v in range(1, 5))
    e = next(e for e in path5.edges if {e.u, e.v} == {2, 3})
    s, r, ds = bt.map_point(EdgePoint(e.id, F(1, 3)))
    assert (s, r) == (3, 2)
    assert ds == e.length - F(1, 3)
    s, r, ds = bt.map_point(vertex_point(path5, 4))
    assert s == 4 and r is None and ds == 0


def test_binarize_preserves_distances_and_weights():
    rng = random.Random(711)
    for _ in range(8):
        g = random_tree(rng, rng.randint(2, 14), weighted=True)
        dm = all_pairs_distances(g)
        bt = binarize(g)
        for u in g.vertices():
            for v in g.vertices():
                assert bt.rd.d(u, v) == dm.d(u, v)
        for a in range(g.n + 1, bt.n_all + 1):
            assert not bt.marked[a]
            assert bt.weight[a] == g.weights[bt.orig[a]]


# ---------------------------------------------------------------- spines


def test_spine_path5(path5):
    st = spine_decompose(binarize(path5))
    leaves = [u for u in st.nodes if u.leaf_kind]
    assert len(leaves) == 5
    assert all(u.left is None for u in leaves)
    assert st.root.tsize == 5
    assert _root_spine_vertices(st) == {1, 2, 3, 4, 5}


def test_spine_perfect7():
    g = Graph.unit(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
    st = spine_decompose(binarize(g))
    assert _root_spine_vertices(st) == {1, 2, 4}


def test_spine_structure_random():
    rng = random.Random(712)
    for _ in range(10):
        g = random_tree(rng, rng.randint(1, 25), weighted=rng.random() < 0.5)
        st = spine_decompose(binarize(g))
        bt = st.bt
        assert st.root.tsize == bt.n_all
        for v in range(1, bt.n_all + 1):
            assert st.leaf_of[v].vertex == v
        for u in st.nodes:
            if u.leaf_kind:
                continue
            assert u.vt == u.right.vt and u.vb == u.left.vb
            assert u.tsize == u.left.tsize + u.right.tsize
            # the joined subspines are tree-adjacent
            assert bt.parent[u.left.vt] == u.right.vb


# ---------------------------------------------------------------- arrays


def test_leaf_arrays_frozen_single_vertex():
    g = Graph(1, [3], [])
    st, ca = _engine(g, lam=F(2))
    side = ca.ft[st.root.idx]
    assert side.xs == [None, F(2, 3), 0]
    assert side.ys == [0, 1, 1]
    assert side.zs == [0, 1, 1]
    assert side.qb[: side.qs[2]] == [1]
    assert side.icov == 1
    assert ca.fb[st.root.idx] is side


def test_vertex_side_aux_unmarked(star3):
    bt = binarize(star3)
    side = _vertex_side(bt, 5, F(1), 99)
    assert side.ys == [0, 1, 1]
    assert side.zs == [0, 0, 0]
    assert side.qb == []


def test_arrays_path5_midspine(path5):
    st, ca = _engine(path5, lam=F(1))
    node = next(
        u for u in st.nodes if not u.leaf_kind and u.vt == 3 and u.vb == 5
    )
    side = ca.ft[node.idx]
    # standing at vertex 3 with unit radius covers {3, 4}; 5 stays out
    i = max(j for j in range(1, len(side.xs)) if side.xs[j] >= 0)
    assert side.ys[i] == 2
    assert side.zs[i] == 2


def test_arrays_shape_invariants():
    rng = random.Random(713)
    for _ in range(10):
        g = random_tree(rng, rng.randint(1, 16), weighted=rng.random() < 0.5)
        lam = F(rng.randint(0, 40), rng.randint(1, 8))
        st, ca = _engine(g, lam=lam)
        for side in list(ca.ft) + list(ca.fb):
            xs, ys, zs = side.xs, side.ys, side.zs
            assert xs[0] is None and xs[-1] == 0
            for i in range(2, len(xs)):
                assert xs[i] < xs[i - 1]
            for i in range(1, len(xs)):
                assert ys[i] >= ys[i - 1] and zs[i] >= zs[i - 1]
                seen = side.qb[: side.qs[i + 1]]
                assert len(seen) == len(set(seen))
                assert zs[i] == len(seen)
            if side.icov:
                assert xs[side.icov] >= 0


# ---------------------------------------------------------------- queries


def test_query_count_path5_frozen(path5):
    st, ca = _engine(path5, lam=F(3, 2))
    ans = query_count(st, ca, vertex_point(path5, 3), report=True)
    assert ans.count == 3
    assert ans.reported == (2, 3, 4)


def test_query_count_star_hub(star3):
    st, ca = _engine(star3, lam=F(1))
    ans = query_count(st, ca, vertex_point(star3, 1), report=True)
    assert ans.count == 4
    assert ans.reported == (1, 2, 3, 4)


def test_query_count_small_radius(path5):
    st, ca = _engine(path5, lam=F(1, 4))
    x = EdgePoint(path5.edges[0].id, F(1, 2))
    ans = query_count(st, ca, x, report=True)
    assert ans.count == 0
    assert ans.reported == ()


def test_query_at_least_k_frozen(path5):
    st, ca = _engine(path5, lam=F(3, 2))
    mid = vertex_point(path5, 3)
    assert query_at_least_k(st, ca, mid, 1)
    assert query_at_least_k(st, ca, mid, 3)
    assert not query_at_least_k(st, ca, mid, 4)
    with pytest.raises(ValueError):
        query_at_least_k(st, ca, mid, 0)
    ca2 = build_coverage_arrays(st, F(3, 2), kmax=2)
    with pytest.raises(ValueError):
        query_at_least_k(st, ca2, mid, 3)


def _random_points(rng, g, count):
    pts = []
    for _ in range(count):
        e = g.edges[rng.randrange(g.m)] if g.m else None
        if e is None:
            pts.append(vertex_point(g, 1))
            continue
        t = e.length * F(rng.randint(0, 8), 8)
        pts.append(canonical_point(g, e.id, t))
    return pts


def _random_radius(rng, g, dm, x):
    v = rng.randint(1, g.n)
    if rng.random() < 0.5:
        # exact boundary: v's covering threshold at x
        return g.weights[v] * point_distance(g, dm, x, v)
    num = rng.randint(0, 24)
    return F(num, rng.randint(1, 6))


def test_query_matches_brute_random():
    rng = random.Random(714)
    for _ in range(12):
        g = random_tree(rng, rng.randint(2, 18), weighted=rng.random() < 0.5)
        dm = all_pairs_distances(g)
        st, _ = _engine(g)
        for x in _random_points(rng, g, 25):
            lam = _random_radius(rng, g, dm, x)
            ca = build_coverage_arrays(st, lam)
            want = sorted(oracle.brute_covered_set(g, dm, x, lam))
            ans = query_count(st, ca, x, report=True)
            assert ans.count == len(want)
            assert ans.reported == tuple(want)
            for k in range(1, g.n + 1):
                assert query_at_least_k(st, ca, x, k) == (len(want) >= k)


def test_query_truncated_agrees():
    rng = random.Random(715)
    for _ in range(8):
        g = random_tree(rng, rng.randint(2, 15), weighted=True)
        dm = all_pairs_distances(g)
        st, _ = _engine(g)
        for x in _random_points(rng, g, 12):
            lam = _random_radius(rng, g, dm, x)
            ca = build_coverage_arrays(st, lam, kmax=3)
            got = len(oracle.brute_covered_set(g, dm, x, lam))
            for k in (1, 2, 3):
                assert query_at_least_k(st, ca, x, k) == (got >= k)


def test_query_reports_only_original_vertices():
    g = Graph(7, [2, 1, 3, 1, 2, 1, 4],
              [(1, 2, 1), (1, 3, 2), (1, 4, 1), (1, 5, 3), (1, 6, 1), (1, 7, 2)])
    dm = all_pairs_distances(g)
    st, _ = _engine(g)
    rng = random.Random(716)
    for x in _random_points(rng, g, 15):
        lam = _random_radius(rng, g, dm, x)
        ca = build_coverage_arrays(st, lam)
        ans = query_count(st, ca, x, report=True)
        assert all(1 <= v <= g.n for v in ans.reported)
        assert ans.count == len(ans.reported)


def test_build_determinism():
    rng = random.Random(717)
    g = random_tree(rng, 20, weighted=True)

    def dump():
        st, ca = _engine(g, lam=F(7, 3))
        shape = [(u.leaf_kind, u.vertex, u.vt, u.vb, u.tsize) for u in st.nodes]
        sides = [
            (s.xs, s.ys, s.zs, s.qs, s.qb, s.icov, s.gx, s.gz)
            for s in list(ca.ft) + list(ca.fb)
        ]
        return shape, sides

    assert dump() == dump()
