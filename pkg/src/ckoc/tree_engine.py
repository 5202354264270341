"""Coverage engine for trees.

A point x covers vertex v at radius lam when w_v * d(x, v) <= lam, and the
covered subtree of x is the largest x-inclusive connected piece of covered
vertices (a heavy vertex blocks everything behind it).  This module answers
covered-subtree counting, reporting, and at-least-k queries for arbitrary
points of a tree in polylogarithmic time after an O(n log n) build:

- an exact rational distance oracle with O(1) vertex-pair queries,
- a binary transformation replacing high-degree vertices by zero-length
  chains of equal-weight copies,
- a spine decomposition of the binary tree, with a weight-balanced search
  tree over every spine, all linked into one decomposition tree,
- per-radius coverage arrays over the decomposition tree: for each node,
  the sizes and marked counts of the largest top-inclusive and
  bottom-inclusive covered subtrees as step functions of the distance to
  an outside point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graph_core import (
    ZERO,
    EdgePoint,
    Graph,
    InstanceError,
    InternalError,
)


# ---------------------------------------------------------------- distances


class _RootedDistances:
    """Exact distances and ancestry on a rooted tree given as parent arrays.

    Vertices are 1..n with parent[root] = 0.  d(u, v) is O(1) via an Euler
    tour with a sparse table; subtree tests are O(1) via entry/exit times.
    """

    def __init__(self, n, root, parent, plen, children):
        self.n = n
        self.root = root
        self.parent = parent
        self.plen = plen
        self.children = children
        tin = [0] * (n + 1)
        tout = [0] * (n + 1)
        dd: list[Fraction] = [ZERO] * (n + 1)
        dep = [0] * (n + 1)
        euler: list[int] = []
        first = [0] * (n + 1)
        order: list[int] = []
        timer = 0
        stack: list[tuple[int, int]] = [(root, 0)]
        tin[root] = timer
        timer += 1
        first[root] = 0
        euler.append(root)
        order.append(root)
        while stack:
            v, ci = stack[-1]
            if ci < len(children[v]):
                stack[-1] = (v, ci + 1)
                c = children[v][ci]
                dd[c] = dd[v] + plen[c]
                dep[c] = dep[v] + 1
                tin[c] = timer
                timer += 1
                first[c] = len(euler)
                euler.append(c)
                order.append(c)
                stack.append((c, 0))
            else:
                stack.pop()
                tout[v] = timer
                if stack:
                    euler.append(stack[-1][0])
        self.tin = tin
        self.tout = tout
        self.dd = dd
        self.dep = dep
        self.order = order
        self._first = first
        self._euler = euler
        m = len(euler)
        logs = [0] * (m + 1)
        for i in range(2, m + 1):
            logs[i] = logs[i // 2] + 1
        self._logs = logs
        table = [list(range(m))]
        j = 1
        while (1 << j) <= m:
            prev = table[-1]
            half = 1 << (j - 1)
            row = []
            for i in range(m - (1 << j) + 1):
                a, bpos = prev[i], prev[i + half]
                row.append(a if dep[euler[a]] <= dep[euler[bpos]] else bpos)
            table.append(row)
            j += 1
        self._table = table

    def lca(self, u: int, v: int) -> int:
        a, bpos = self._first[u], self._first[v]
        if a > bpos:
            a, bpos = bpos, a
        j = self._logs[bpos - a + 1]
        row = self._table[j]
        x, y = row[a], row[bpos - (1 << j) + 1]
        e = self._euler
        best = x if self.dep[e[x]] <= self.dep[e[y]] else y
        return e[best]

    def d(self, u: int, v: int) -> Fraction:
        return self.dd[u] + self.dd[v] - 2 * self.dd[self.lca(u, v)]

    def in_subtree(self, a: int, v: int) -> bool:
        return self.tin[a] <= self.tin[v] < self.tout[a]


def _rooted_arrays(g: Graph, root: int):
    """Parent arrays of the tree rooted at root, children in id order."""
    n = g.n
    parent = [0] * (n + 1)
    plen: list[Fraction] = [ZERO] * (n + 1)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    seen = [False] * (n + 1)
    seen[root] = True
    queue = [root]
    for v in queue:
        nbrs = sorted((u, ev) for u, ev in g.adj[v])
        for u, ev in nbrs:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                plen[u] = ev.length
                children[v].append(u)
                queue.append(u)
    if not all(seen[1:]):
        raise InstanceError("tree distance oracle requires a connected tree")
    return parent, plen, children


class TreeDistanceOracle:
    """O(1) exact vertex-pair distances on a tree after O(n log n) build."""

    def __init__(self, g: Graph, root: int = 1):
        if not g.is_tree:
            raise InstanceError("distance oracle requires a tree")
        parent, plen, children = _rooted_arrays(g, root)
        self.g = g
        self.root = root
        self._rd = _RootedDistances(g.n, root, parent, plen, children)

    def d(self, u: int, v: int) -> Fraction:
        return self._rd.d(u, v)

    def lca(self, u: int, v: int) -> int:
        return self._rd.lca(u, v)

    def depth(self, v: int) -> Fraction:
        return self._rd.dd[v]


def build_distance_oracle(g: Graph, root: int = 1) -> TreeDistanceOracle:
    return TreeDistanceOracle(g, root)


# ---------------------------------------------------------------- binarize


@dataclass
class BinaryTransform:
    """Binary version of a rooted tree: vertices of more than two children
    are split by a zero-length chain of copies; original ids are 1..n and
    marked, copies carry the weight of their original."""

    g: Graph
    root: int
    n_all: int
    parent: list[int]
    plen: list[Fraction]
    children: list[list[int]]
    weight: list[Fraction]
    orig: list[int]
    marked: list[bool]
    edge_child: list[int]
    rd: _RootedDistances

    def map_point(self, x: EdgePoint) -> tuple[int, Optional[int], Fraction]:
        """Locate x on the transformed tree: (s, r, dist to s) with r the
        parent-side endpoint, or (v, None, 0) at a vertex."""
        if x.edge < 0:
            return self.root, None, ZERO
        e = self.g.edges[x.edge]
        if x.t == 0:
            return e.u, None, ZERO
        if x.t == e.length:
            return e.v, None, ZERO
        c = self.edge_child[x.edge]
        ds = e.length - x.t if c == e.v else x.t
        return c, self.parent[c], ds


def binarize(g: Graph, root: int = 1) -> BinaryTransform:
    if not g.is_tree:
        raise InstanceError("binarization requires a tree")
    n = g.n
    parent0, _, _ = _rooted_arrays(g, root)
    # child lists with originating edges, in child-id order
    kids: list[list[tuple[int, int, Fraction]]] = [[] for _ in range(n + 1)]
    for v in g.vertices():
        for u, ev in sorted(g.adj[v], key=lambda p: p[0]):
            if parent0[u] == v:
                kids[v].append((u, ev.id, ev.length))
    parent = [0] * (n + 1)
    plen: list[Fraction] = [ZERO] * (n + 1)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    weight: list[Fraction] = [ZERO] + [g.weights[v] for v in g.vertices()]
    orig = list(range(n + 1))
    marked = [False] + [True] * n
    edge_child = [0] * g.m
    nxt = n

    def new_aux(of: int) -> int:
        nonlocal nxt
        nxt += 1
        parent.append(0)
        plen.append(ZERO)
        children.append([])
        weight.append(weight[of])
        orig.append(of)
        marked.append(False)
        return nxt

    def attach(p: int, c: int, length: Fraction, eid: int | None):
        parent[c] = p
        plen[c] = length
        children[p].append(c)
        if eid is not None:
            edge_child[eid] = c

    for v in g.vertices():
        ks = kids[v]
        t = len(ks)
        if t <= 2:
            for c, eid, length in ks:
                attach(v, c, length, eid)
            continue
        attach(v, ks[0][0], ks[0][2], ks[0][1])
        chain = v
        for c, eid, length in ks[1:-1]:
            a = new_aux(v)
            attach(chain, a, ZERO, None)
            attach(a, c, length, eid)
            chain = a
        attach(chain, ks[-1][0], ks[-1][2], ks[-1][1])

    rd = _RootedDistances(nxt, root, parent, plen, children)
    return BinaryTransform(
        g, root, nxt, parent, plen, children, weight, orig, marked, edge_child, rd
    )


# ---------------------------------------------------------------- spines


class GNode:
    """Node of the decomposition tree.  Leaf-kind nodes stand for one spine
    vertex; their only possible child (stored in left) is the root of the
    search tree built for the hanging subtree.  Internal-kind nodes are
    search-tree nodes over a contiguous subspine: left covers the lower
    part, right the upper."""

    __slots__ = ("idx", "leaf_kind", "vertex", "vt", "vb", "parent", "left",
                 "right", "tsize", "echild")

    def __init__(self, idx, leaf_kind, vertex, vt, vb, tsize, echild):
        self.idx = idx
        self.leaf_kind = leaf_kind
        self.vertex = vertex
        self.vt = vt
        self.vb = vb
        self.parent: Optional[GNode] = None
        self.left: Optional[GNode] = None
        self.right: Optional[GNode] = None
        self.tsize = tsize
        self.echild = echild

    def __repr__(self):
        kind = "leaf" if self.leaf_kind else "node"
        return f"GNode({kind} #{self.idx} vt={self.vt} vb={self.vb} |T|={self.tsize})"


class SpineTree:
    """Decomposition tree over the binary transform: spines chosen by
    descending into the larger subtree, a weight-balanced search tree per
    spine, hanging subtrees linked below their spine vertex's leaf."""

    def __init__(self, bt: BinaryTransform):
        self.bt = bt
        n = bt.n_all
        size = [1] * (n + 1)
        for v in reversed(bt.rd.order):
            for c in bt.children[v]:
                size[v] += size[c]
        self.size = size
        left = [0] * (n + 1)
        right = [0] * (n + 1)
        for v in range(1, n + 1):
            cs = bt.children[v]
            if len(cs) == 1:
                right[v] = cs[0]
            elif len(cs) == 2:
                a, b = cs
                # larger subtree continues the spine; ties go to the
                # smaller id for determinism
                if (size[a], -a) > (size[b], -b):
                    right[v], left[v] = a, b
                else:
                    right[v], left[v] = b, a
        self.left = left
        self.right = right
        self.nodes: list[GNode] = []
        self.leaf_of: list[Optional[GNode]] = [None] * (n + 1)
        self.root = self._decompose(bt.root)
        h = self._height(self.root)
        self.height = h
        bound = 4 * math.log2(n + 1) + 8
        if h > bound:
            raise InternalError(f"decomposition height {h} exceeds {bound:.1f}")

    def _new(self, leaf_kind, vertex, vt, vb, tsize, echild) -> GNode:
        node = GNode(len(self.nodes), leaf_kind, vertex, vt, vb, tsize, echild)
        self.nodes.append(node)
        return node

    def _decompose(self, top: int) -> GNode:
        spine = [top]
        while self.right[spine[-1]]:
            spine.append(self.right[spine[-1]])
        rev = spine[::-1]  # leaves left to right are bottom-up
        leaves = []
        for s in rev:
            h = self.left[s]
            w = self.size[s] - (self.size[self.right[s]] if self.right[s] else 0)
            node = self._new(True, s, s, s, w, h if h else None)
            self.leaf_of[s] = node
            if h:
                sub = self._decompose(h)
                node.left = sub
                sub.parent = node
            leaves.append(node)
        pref = [0]
        for node in leaves:
            pref.append(pref[-1] + node.tsize)

        def build(lo: int, hi: int) -> GNode:
            if lo == hi:
                return leaves[lo]
            total = pref[hi + 1] - pref[lo]
            lo2, hi2 = lo, hi
            while lo2 < hi2:
                mid = (lo2 + hi2) // 2
                if 2 * (pref[mid + 1] - pref[lo]) > total:
                    hi2 = mid
                else:
                    lo2 = mid + 1
            j = min(lo2, hi - 1)
            lnode = build(lo, j)
            rnode = build(j + 1, hi)
            node = self._new(
                False, 0, rnode.vt, lnode.vb, lnode.tsize + rnode.tsize, lnode.vt
            )
            node.left = lnode
            node.right = rnode
            lnode.parent = node
            rnode.parent = node
            return node

        return build(0, len(leaves) - 1)

    def _height(self, node: GNode) -> int:
        best = 0
        stack = [(node, 0)]
        while stack:
            u, h = stack.pop()
            best = max(best, h)
            if u.left is not None:
                stack.append((u.left, h + 1))
            if u.right is not None:
                stack.append((u.right, h + 1))
        return best

    def post_order(self):
        out = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            out.append(u)
            if u.left is not None:
                stack.append(u.left)
            if u.right is not None:
                stack.append(u.right)
        return reversed(out)


def spine_decompose(bt: BinaryTransform) -> SpineTree:
    return SpineTree(bt)


# ---------------------------------------------------------------- arrays


class _Side:
    """Step function of one node and one direction: tuple arrays descending
    in x (index 0 is the plus-infinity sentinel), y subtree sizes, z marked
    counts, Q deltas as slices qb[qs[i]:qs[i+1]], icov the first index
    covering the whole subspine (0 when none), and the truncated break
    lists gx/gz for capped counting."""

    __slots__ = ("xs", "ys", "zs", "qs", "qb", "icov", "gx", "gz")

    def __init__(self, xs, ys, zs, deltas, icov, kmax):
        self.xs = xs
        self.ys = ys
        self.zs = zs
        qs = [0]
        qb: list[int] = []
        for dlt in deltas:
            qb.extend(dlt)
            qs.append(len(qb))
        self.qs = qs
        self.qb = qb
        self.icov = icov
        gx = []
        gz = []
        for i in range(1, len(xs)):
            if zs[i] > zs[i - 1]:
                gx.append(xs[i])
                gz.append(zs[i])
                if len(gx) >= kmax:
                    break
        self.gx = gx
        self.gz = gz


def _locate(side: _Side, key: Fraction) -> int:
    """Largest index with xs[index] >= key; 0 (the sentinel) when none."""
    xs = side.xs
    lo, hi = 1, len(xs)
    while lo < hi:
        mid = (lo + hi) // 2
        if xs[mid] >= key:
            lo = mid + 1
        else:
            hi = mid
    return lo - 1


def _g_value(side: _Side, key: Fraction) -> int:
    """Marked count at key from the truncated break list; at least the
    truncation bound whenever the true count reaches it."""
    gx = side.gx
    lo, hi = 0, len(gx)
    while lo < hi:
        mid = (lo + hi) // 2
        if gx[mid] >= key:
            lo = mid + 1
        else:
            hi = mid
    return side.gz[lo - 1] if lo else 0


def _covers_spine(side: _Side, key: Fraction) -> bool:
    return side.icov >= 1 and key <= side.xs[side.icov]


class _Builder:
    """Accumulates one side's tuples with strictly descending x; equal-x
    inserts collapse into the existing tuple (its cumulative values win)."""

    def __init__(self):
        self.xs: list[Optional[Fraction]] = [None]
        self.ys = [0]
        self.zs = [0]
        self.deltas: list[list[int]] = [[]]

    def add(self, x, y, z, delta):
        if self.xs[-1] is not None and x == self.xs[-1]:
            self.ys[-1] = y
            self.zs[-1] = z
            self.deltas[-1] = self.deltas[-1] + list(delta)
            return
        self.xs.append(x)
        self.ys.append(y)
        self.zs.append(z)
        self.deltas.append(list(delta))

    def close(self):
        if self.xs[-1] is None or self.xs[-1] > 0:
            self.add(ZERO, self.ys[-1], self.zs[-1], [])

    def side(self, icov_x: Optional[Fraction], kmax: int) -> _Side:
        """icov_x: x-coordinate of the covering breakpoint, None if the
        subspine is never fully covered."""
        icov = 0
        if icov_x is not None:
            xs = self.xs
            lo, hi = 1, len(xs)
            while lo < hi:
                mid = (lo + hi) // 2
                if xs[mid] >= icov_x:
                    lo = mid + 1
                else:
                    hi = mid
            icov = lo - 1
            if icov < 1 or xs[icov] != icov_x:
                raise InternalError("covering breakpoint missing from arrays")
        return _Side(self.xs, self.ys, self.zs, self.deltas, icov, kmax)


def _vertex_side(bt: BinaryTransform, s: int, lam: Fraction, kmax: int) -> _Side:
    x0 = lam / bt.weight[s]
    m = 1 if bt.marked[s] else 0
    own = [s] if bt.marked[s] else []
    b = _Builder()
    b.add(x0, 1, m, own)
    b.close()
    return b.side(x0, kmax)


def _prefix_q(side: _Side, upto: int) -> list[int]:
    """Union of Q deltas of tuples 0..upto."""
    return side.qb[: side.qs[upto + 1]]


def _merge_one(
    bt: BinaryTransform, s: int, child: _Side, d: Fraction, lam: Fraction, kmax: int
) -> _Side:
    """Side of a spine-vertex node with a hanging subtree: the vertex gates
    everything at lam/w_s, the child contributes at distance d farther."""
    x0 = lam / bt.weight[s]
    m = 1 if bt.marked[s] else 0
    j1 = _locate(child, x0 + d)
    b = _Builder()
    first = ([s] if bt.marked[s] else []) + _prefix_q(child, j1)
    b.add(x0, 1 + child.ys[j1], m + child.zs[j1], first)
    j = j1 + 1
    while j < len(child.xs) and child.xs[j] - d >= 0:
        b.add(
            child.xs[j] - d,
            1 + child.ys[j],
            m + child.zs[j],
            child.qb[child.qs[j] : child.qs[j + 1]],
        )
        j += 1
    b.close()
    return b.side(x0, kmax)


def _merge_two(prim: _Side, sec: _Side, d: Fraction, kmax: int) -> _Side:
    """Side of a search-tree node: prim holds the subspine adjacent to the
    query anchor; sec joins in, shifted by d, only while prim's subspine is
    fully covered."""
    if prim.icov == 0:
        return prim
    xr = prim.xs[prim.icov]
    j1 = _locate(sec, xr + d)
    b = _Builder()
    for i in range(1, prim.icov):
        b.add(prim.xs[i], prim.ys[i], prim.zs[i], prim.qb[prim.qs[i] : prim.qs[i + 1]])
    seam_q = prim.qb[prim.qs[prim.icov] : prim.qs[prim.icov + 1]] + _prefix_q(sec, j1)
    b.add(xr, prim.ys[prim.icov] + sec.ys[j1], prim.zs[prim.icov] + sec.zs[j1], seam_q)
    i = prim.icov + 1
    j = j1 + 1
    np_, ns = len(prim.xs), len(sec.xs)
    while i < np_ and j < ns and sec.xs[j] - d >= 0:
        xa = prim.xs[i]
        xb = sec.xs[j] - d
        if xa > xb:
            b.add(xa, prim.ys[i] + sec.ys[j - 1], prim.zs[i] + sec.zs[j - 1],
                  prim.qb[prim.qs[i] : prim.qs[i + 1]])
            i += 1
        elif xb > xa:
            b.add(xb, prim.ys[i - 1] + sec.ys[j], prim.zs[i - 1] + sec.zs[j],
                  sec.qb[sec.qs[j] : sec.qs[j + 1]])
            j += 1
        else:
            b.add(xa, prim.ys[i] + sec.ys[j], prim.zs[i] + sec.zs[j],
                  prim.qb[prim.qs[i] : prim.qs[i + 1]]
                  + sec.qb[sec.qs[j] : sec.qs[j + 1]])
            i += 1
            j += 1
    while i < np_:
        b.add(prim.xs[i], prim.ys[i] + sec.ys[j - 1], prim.zs[i] + sec.zs[j - 1],
              prim.qb[prim.qs[i] : prim.qs[i + 1]])
        i += 1
    while j < ns and sec.xs[j] - d >= 0:
        b.add(sec.xs[j] - d, prim.ys[np_ - 1] + sec.ys[j], prim.zs[np_ - 1] + sec.zs[j],
              sec.qb[sec.qs[j] : sec.qs[j + 1]])
        j += 1
    b.close()
    if sec.icov == 0:
        cov_x = None
    else:
        cov_x = min(xr, sec.xs[sec.icov] - d)
        if cov_x < 0:
            cov_x = None
    return b.side(cov_x, kmax)


@dataclass
class CoverageArrays:
    lam: Fraction
    kmax: int
    ft: list[_Side]
    fb: list[_Side]


def build_coverage_arrays(
    st: SpineTree, lam: Fraction, kmax: Optional[int] = None
) -> CoverageArrays:
    if lam < 0:
        raise ValueError("radius must be nonnegative")
    bt = st.bt
    dd = bt.rd.dd
    kmax = bt.n_all if kmax is None else max(1, kmax)
    ft: list[Optional[_Side]] = [None] * len(st.nodes)
    fb: list[Optional[_Side]] = [None] * len(st.nodes)
    for node in st.post_order():
        if node.leaf_kind:
            s = node.vertex
            if node.left is None:
                side = _vertex_side(bt, s, lam, kmax)
            else:
                d = bt.plen[node.echild]
                side = _merge_one(bt, s, ft[node.left.idx], d, lam, kmax)
            ft[node.idx] = side
            fb[node.idx] = side
        else:
            lc, rc = node.left, node.right
            d_t = dd[lc.vt] - dd[rc.vt]
            d_b = dd[lc.vb] - dd[rc.vb]
            ft[node.idx] = _merge_two(ft[rc.idx], ft[lc.idx], d_t, kmax)
            fb[node.idx] = _merge_two(fb[lc.idx], fb[rc.idx], d_b, kmax)
    return CoverageArrays(lam, kmax, ft, fb)


# ---------------------------------------------------------------- queries


@dataclass(frozen=True)
class CoverageAnswer:
    count: int
    reported: Optional[tuple[int, ...]] = None


def _walk(st: SpineTree, ca: CoverageArrays, x: EdgePoint, k: Optional[int],
          collect: bool):
    bt = st.bt
    rd = bt.rd
    lam = ca.lam
    s, r, ds = bt.map_point(x)
    elen = bt.plen[s] if r is not None else ZERO

    def dist(v: int) -> Fraction:
        if r is None:
            return rd.d(s, v)
        if rd.in_subtree(s, v):
            return ds + rd.d(s, v)
        return (elen - ds) + rd.d(r, v)

    count = 0
    out: list[int] = [] if collect else None
    use_g = k is not None

    def contrib(side: _Side, key: Fraction):
        nonlocal count
        if use_g:
            count += _g_value(side, key)
        else:
            idx = _locate(side, key)
            count += side.zs[idx]
            if collect:
                out.extend(side.qb[: side.qs[idx + 1]])

    u = st.leaf_of[s]
    flag_a = False
    flag_b = False
    prev: Optional[GNode] = None
    while u is not None:
        if u.leaf_kind:
            sv = u.vertex
            if prev is None:
                if bt.weight[sv] * ds <= lam:
                    flag_b = True
                    contrib(ca.ft[u.idx], ds)
            else:
                if flag_a:
                    break
                if bt.weight[sv] * dist(sv) > lam:
                    break
                flag_b = True
                if bt.marked[sv]:
                    count += 1
                    if collect:
                        out.append(sv)
        else:
            if prev is u.right:
                if flag_b:
                    lc = u.left
                    key = dist(lc.vt)
                    side = ca.ft[lc.idx]
                    contrib(side, key)
                    if not _covers_spine(side, key):
                        flag_b = False
            else:
                if not flag_a:
                    rc = u.right
                    key = dist(rc.vb)
                    side = ca.fb[rc.idx]
                    contrib(side, key)
                    if not _covers_spine(side, key):
                        flag_a = True
        if use_g and count >= k:
            return count, out
        prev = u
        u = u.parent
    return count, out


def query_count(st: SpineTree, ca: CoverageArrays, x: EdgePoint,
                report: bool = False) -> CoverageAnswer:
    count, out = _walk(st, ca, x, None, report)
    return CoverageAnswer(count, tuple(sorted(out)) if report else None)


def query_at_least_k(st: SpineTree, ca: CoverageArrays, x: EdgePoint, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be positive")
    if k > ca.kmax:
        raise ValueError(f"arrays truncated at {ca.kmax}, cannot answer k={k}")
    count, _ = _walk(st, ca, x, k, False)
    return count >= k
