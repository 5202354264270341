"""Feasibility testing and optimal solvers on trees.

Critical points: for radius lam every vertex v determines one test point,
the point of v's root path at distance lam/w_v from v (the root when it
is closer).  Whenever any point of the tree covers k vertices at radius
lam, one of these n points does, so feasibility only ever probes them.

The weighted solver collects candidate radii as intersection ordinates of
distance lines generated by a recursive centroid decomposition and runs
the arrangement search over the tree feasibility test.

The unweighted solver (unit vertex weights, rational lengths) binary
searches the optimal radius on an integer grid; each probe counts
coverage at all n critical points with vectorized subtree and centroid
ball counts, which keeps trees with a hundred thousand vertices in
budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrangement_search import Line, LineSet, lowest_feasible_vertex
from .general_feasibility import FeasibilityResult
from .graph_core import (
    ZERO,
    EdgePoint,
    Graph,
    InstanceError,
    InternalError,
    Solution,
    canonical_point,
    vertex_point,
)
from .tree_engine import (
    _RootedDistances,
    _rooted_arrays,
    binarize,
    build_coverage_arrays,
    query_at_least_k,
    query_count,
    spine_decompose,
)


# ---------------------------------------------------------------- context


class _TreeContext:
    """Rooted arrays, ancestor jumps and the coverage engine for one tree,
    shared across repeated feasibility probes."""

    def __init__(self, g: Graph):
        if not g.is_tree:
            raise InstanceError("tree solver requires a tree instance")
        self.g = g
        parent, plen, children = _rooted_arrays(g, 1)
        self.rd = _RootedDistances(g.n, 1, parent, plen, children)
        eid = [-1] * (g.n + 1)
        for v in g.vertices():
            for u, ev in g.adj[v]:
                if parent[u] == v:
                    eid[u] = ev.id
        self.eid = eid
        up = [parent[:]]
        for _ in range(max(0, g.n.bit_length() - 1)):
            prev = up[-1]
            up.append([prev[prev[v]] for v in range(g.n + 1)])
        self.up = up
        self._st = None

    def spine(self):
        if self._st is None:
            self._st = spine_decompose(binarize(self.g))
        return self._st

    def point(self, v: int, lam: Fraction) -> EdgePoint:
        """Critical point of v: on v's root path at distance lam/w_v."""
        g, rd = self.g, self.rd
        rem = lam / g.weights[v]
        if rem == 0:
            return vertex_point(g, v)
        if rem >= rd.dd[v]:
            return vertex_point(g, 1)
        target = rd.dd[v] - rem
        c = v
        for row in reversed(self.up):
            a = row[c]
            if a and rd.dd[a] > target:
                c = a
        p = rd.parent[c]
        e = g.edges[self.eid[c]]
        t = target - rd.dd[p]
        if e.u != p:
            t = e.length - t
        return canonical_point(g, e.id, t)

    def point_distance(self, x: EdgePoint, u: int) -> Fraction:
        if x.edge < 0:
            return self.rd.d(1, u)
        e = self.g.edges[x.edge]
        return min(x.t + self.rd.d(e.u, u), e.length - x.t + self.rd.d(e.v, u))


@dataclass(frozen=True)
class CriticalPointSet:
    """One test point per vertex; entry 0 of points is None."""

    lam: Fraction
    points: tuple

    def __len__(self) -> int:
        return len(self.points) - 1


def critical_points(g: Graph, lam: Fraction) -> CriticalPointSet:
    if lam < 0:
        raise ValueError("radius must be nonnegative")
    return _critical_points(_TreeContext(g), lam)


def _critical_points(ctx: _TreeContext, lam: Fraction) -> CriticalPointSet:
    pts = [None] + [ctx.point(v, lam) for v in ctx.g.vertices()]
    return CriticalPointSet(lam, tuple(pts))


# ---------------------------------------------------------------- feasibility


def _feasible_scan(ctx: _TreeContext, k: int, lam: Fraction):
    """First critical point covering k vertices, with the engine state."""
    st = ctx.spine()
    ca = build_coverage_arrays(st, lam, kmax=k)
    seen = set()
    for v in ctx.g.vertices():
        x = ctx.point(v, lam)
        if x in seen:
            continue
        seen.add(x)
        if query_at_least_k(st, ca, x, k):
            return x, st, ca
    return None


def is_feasible_tree(g: Graph, k: int, lam: Fraction, _ctx=None) -> FeasibilityResult:
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} out of range for n={g.n}")
    if lam < 0:
        return FeasibilityResult(False)
    ctx = _ctx if _ctx is not None else _TreeContext(g)
    hit = _feasible_scan(ctx, k, lam)
    if hit is None:
        return FeasibilityResult(False)
    x, st, ca = hit
    covered = query_count(st, ca, x, report=True).reported
    if len(covered) < k:
        raise InternalError("coverage report disagrees with the k test")
    order = sorted(covered, key=lambda u: (ctx.point_distance(x, u), u))
    return FeasibilityResult(True, (x, frozenset(order[:k])))


# ---------------------------------------------------------------- weighted


def _centroid_lines(g: Graph) -> LineSet:
    """Distance lines of every recursive centroid: vertex v in a component
    with centroid c contributes y = w_v (x + d(c,v)) and its mirror, so the
    optimal radius of any binding pair appears as an intersection
    ordinate."""
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(g.n + 1)]
    for e in g.edges:
        adj[e.u].append((e.v, e.length))
        adj[e.v].append((e.u, e.length))
    alive = [True] * (g.n + 1)
    aff: dict[tuple[Fraction, Fraction], tuple] = {}
    stack = [1]
    while stack:
        seed = stack.pop()
        if not alive[seed]:
            continue
        comp = [seed]
        par = {seed: 0}
        for v in comp:
            for u, _l in adj[v]:
                if alive[u] and u not in par:
                    par[u] = v
                    comp.append(u)
        size = dict.fromkeys(comp, 1)
        heavy = dict.fromkeys(comp, 0)
        for v in reversed(comp):
            p = par[v]
            if p:
                size[p] += size[v]
                heavy[p] = max(heavy[p], size[v])
        total = len(comp)
        c = min(comp, key=lambda v: (max(heavy[v], total - size[v]), v))
        dist = {c: ZERO}
        bfs = [c]
        for v in bfs:
            for u, l in adj[v]:
                if alive[u] and u not in dist:
                    dist[u] = dist[v] + l
                    bfs.append(u)
        for v in bfs:
            w = g.weights[v]
            aff.setdefault((w, w * dist[v]), ("rising", v, c))
            aff.setdefault((-w, w * dist[v]), ("falling", v, c))
        alive[c] = False
        for u, _l in adj[c]:
            if alive[u]:
                stack.append(u)
    lines = [Line(m, b, org) for (m, b), org in aff.items()]
    return LineSet(lines, [], g.weight_scale, g.length_scale)


def solve_weighted_tree(g: Graph, k: int, search: str = "explicit") -> Solution:
    """Optimal radius, center point and k-vertex witness block for a
    weighted tree."""
    if not g.is_tree:
        raise InstanceError("weighted tree solver requires a tree")
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} out of range for n={g.n}")
    if k == 1 or g.n == 1:
        return Solution(ZERO, vertex_point(g, 1), frozenset({1}))
    ctx = _TreeContext(g)
    memo: dict[Fraction, bool] = {}

    def accept(lam: Fraction) -> bool:
        if lam not in memo:
            memo[lam] = lam >= 0 and _feasible_scan(ctx, k, lam) is not None
        return memo[lam]

    ls = _centroid_lines(g)
    ans = lowest_feasible_vertex(ls, accept, strategy=search)
    lam = ans.v1[1]
    res = is_feasible_tree(g, k, lam, _ctx=ctx)
    if not res.feasible or res.witness is None:
        raise InternalError("lowest candidate radius is not feasible")
    x, block = res.witness
    return Solution(lam, x, block)


# ---------------------------------------------------------------- unweighted


def _int_arrays(g: Graph, sc2: int):
    """Rooted tree in integer units of 1/sc2: parents, edge ids, depths,
    children in id order, and entry/exit times."""
    n = g.n
    parent = [0] * (n + 1)
    eid = [-1] * (n + 1)
    depth = [0] * (n + 1)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    order = [1]
    seen = [False] * (n + 1)
    seen[1] = True
    for v in order:
        for u, ev in sorted(g.adj[v], key=lambda p: p[0]):
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                eid[u] = ev.id
                depth[u] = depth[v] + int(ev.length * sc2)
                children[v].append(u)
                order.append(u)
    tin = [0] * (n + 1)
    tout = [0] * (n + 1)
    timer = 0
    stack = [(1, 0)]
    tin[1] = timer
    timer += 1
    while stack:
        v, ci = stack[-1]
        if ci < len(children[v]):
            stack[-1] = (v, ci + 1)
            c = children[v][ci]
            tin[c] = timer
            timer += 1
            stack.append((c, 0))
        else:
            stack.pop()
            tout[v] = timer
    return parent, eid, depth, children, tin, tout


def _centroid_pack(n: int, adj, stride: int):
    """Recursive centroid decomposition flattened for vectorized ball
    counts: per-vertex chains (centroid, distance, branch id) plus packed
    sorted distance arrays per centroid and per branch."""
    alive = bytearray([1]) * (n + 1)
    chains: list[list[tuple[int, int, int]]] = [[] for _ in range(n + 1)]
    fc: list[int] = []
    fd: list[int] = []
    bb: list[int] = []
    bd: list[int] = []
    par_t = [0] * (n + 1)
    size_t = [0] * (n + 1)
    heavy_t = [0] * (n + 1)
    dist_t = [0] * (n + 1)
    br_t = [0] * (n + 1)
    seen = [0] * (n + 1)
    stamp = 0
    nbid = 1
    stack = [1]
    while stack:
        seed = stack.pop()
        if not alive[seed]:
            continue
        stamp += 1
        comp = [seed]
        seen[seed] = stamp
        par_t[seed] = 0
        for v in comp:
            for u, _l in adj[v]:
                if alive[u] and seen[u] != stamp:
                    seen[u] = stamp
                    par_t[u] = v
                    comp.append(u)
        for v in comp:
            size_t[v] = 1
            heavy_t[v] = 0
        for v in reversed(comp):
            p = par_t[v]
            if p:
                size_t[p] += size_t[v]
                if size_t[v] > heavy_t[p]:
                    heavy_t[p] = size_t[v]
        total = len(comp)
        c = comp[0]
        best = None
        for v in comp:
            other = total - size_t[v]
            score = heavy_t[v] if heavy_t[v] > other else other
            if best is None or score < best or (score == best and v < c):
                best, c = score, v
        stamp += 1
        seen[c] = stamp
        dist_t[c] = 0
        br_t[c] = 0
        bfs = [c]
        for v in bfs:
            for u, l in adj[v]:
                if alive[u] and seen[u] != stamp:
                    seen[u] = stamp
                    dist_t[u] = dist_t[v] + l
                    if v == c:
                        br_t[u] = nbid
                        nbid += 1
                    else:
                        br_t[u] = br_t[v]
                    bfs.append(u)
        for v in bfs:
            chains[v].append((c, dist_t[v], br_t[v]))
            fc.append(c)
            fd.append(dist_t[v])
            if br_t[v]:
                bb.append(br_t[v])
                bd.append(dist_t[v])
        alive[c] = 0
        for u, _l in adj[c]:
            if alive[u]:
                stack.append(u)
    ch_off = np.zeros(n + 1, dtype=np.int64)
    ch_len = np.zeros(n + 1, dtype=np.int64)
    flat_c: list[int] = []
    flat_d: list[int] = []
    flat_b: list[int] = []
    for v in range(1, n + 1):
        ch_off[v] = len(flat_c)
        ch_len[v] = len(chains[v])
        for c, d, b in chains[v]:
            flat_c.append(c)
            flat_d.append(d)
            flat_b.append(b)
    fcn = np.asarray(fc, dtype=np.int64)
    fdn = np.asarray(fd, dtype=np.int64)
    fulls = np.sort(fcn * stride + fdn)
    full_start = np.zeros(n + 2, dtype=np.int64)
    full_start[1:] = np.cumsum(np.bincount(fcn, minlength=n + 1))
    bbn = np.asarray(bb, dtype=np.int64)
    bdn = np.asarray(bd, dtype=np.int64)
    brs = np.sort(bbn * stride + bdn)
    br_start = np.zeros(nbid + 1, dtype=np.int64)
    br_start[1:] = np.cumsum(np.bincount(bbn, minlength=nbid))
    return (
        ch_off,
        ch_len,
        np.asarray(flat_c, dtype=np.int64),
        np.asarray(flat_d, dtype=np.int64),
        np.asarray(flat_b, dtype=np.int64),
        fulls,
        full_start,
        brs,
        br_start,
        nbid,
    )


def _prefix_counts(levels, stride: int, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """For each query: number of tree positions i < t[q] whose depth is at
    most x[q], via the per-level sorted blocks."""
    res = np.zeros(t.size, dtype=np.int64)
    xk = np.clip(x, -1, stride - 2)
    for b in range(len(levels)):
        sel = ((t >> b) & 1).astype(bool)
        if not sel.any():
            continue
        j = (t[sel] >> b) - 1
        pos = np.searchsorted(levels[b], j * stride + xk[sel], side="right")
        res[sel] += pos - (j << b)
    return res


class _ScaleOverflow(Exception):
    """Raised when scaled coordinates would not fit 64-bit packing."""


class _UnweightedEngine:
    """Integer-scaled coverage counting at all critical points at once."""

    def __init__(self, g: Graph):
        n = g.n
        self.g = g
        self.n = n
        self.sc2 = 2 * g.length_scale
        parent, eid, depth, children, tin, tout = _int_arrays(g, self.sc2)
        self.parent = parent
        self.eid = eid
        self.depth = depth
        self.children = children
        self.tin = tin
        self.tout = tout
        self.maxdepth = max(depth)
        self.stride = 2 * self.maxdepth + 3
        n2 = 1 << max(1, (n - 1).bit_length())
        # block ids reach n2 and branch ids roughly n log n
        big = max(n2, n * (n.bit_length() + 2)) + 4
        if big * self.stride >= 2**62:
            raise _ScaleOverflow
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
        for e in g.edges:
            l = int(e.length * self.sc2)
            adj[e.u].append((e.v, l))
            adj[e.v].append((e.u, l))
        self.adj = adj
        (
            self.ch_off,
            self.ch_len,
            self.ch_c,
            self.ch_d,
            self.ch_b,
            self.fulls,
            self.full_start,
            self.brs,
            self.br_start,
            self.nbid,
        ) = _centroid_pack(n, adj, self.stride)
        self.depth_np = np.asarray(depth, dtype=np.int64)
        self.tin_np = np.asarray(tin, dtype=np.int64)
        self.tout_np = np.asarray(tout, dtype=np.int64)
        self.liftdep = self.depth_np.copy()
        self.liftdep[0] = -1
        ups = [np.asarray(parent, dtype=np.int64)]
        for _ in range(max(0, n.bit_length() - 1)):
            ups.append(ups[-1][ups[-1]])
        self.ups = ups
        base = np.full(n2, self.stride - 1, dtype=np.int64)
        base[self.tin_np[1:]] = self.depth_np[1:]
        levels = []
        width = 1
        while width <= n2:
            blocks = np.sort(base.reshape(-1, width), axis=1)
            offs = np.arange(blocks.shape[0], dtype=np.int64) * self.stride
            levels.append((blocks + offs[:, None]).ravel())
            width *= 2
        self.levels = levels
        self.verts = np.arange(1, n + 1, dtype=np.int64)

    def _ball(self, p: np.ndarray, rho: np.ndarray) -> np.ndarray:
        ln = self.ch_len[p]
        csum = np.cumsum(ln)
        total = int(csum[-1]) if ln.size else 0
        owner = np.repeat(np.arange(p.size, dtype=np.int64), ln)
        at = np.repeat(self.ch_off[p], ln) + (
            np.arange(total, dtype=np.int64) - np.repeat(csum - ln, ln)
        )
        cc = self.ch_c[at]
        bound = np.clip(rho[owner] - self.ch_d[at], -1, self.stride - 2)
        f = (
            np.searchsorted(self.fulls, cc * self.stride + bound, side="right")
            - self.full_start[cc]
        )
        bbid = self.ch_b[at]
        br = (
            np.searchsorted(self.brs, bbid * self.stride + bound, side="right")
            - self.br_start[bbid]
        )
        out = np.bincount(owner, weights=(f - br).astype(np.float64), minlength=p.size)
        return out.astype(np.int64)

    def locate(self, radius: int):
        """Edge child and target depth of every vertex's critical point."""
        td = np.maximum(self.depth_np[1:] - radius, 0)
        cur = self.verts.copy()
        for row in reversed(self.ups):
            anc = row[cur]
            ok = self.liftdep[anc] > td
            cur = np.where(ok, anc, cur)
        cur[0] = self.children[1][0]  # root: any child, its terms cancel
        return cur, td

    def counts(self, radius: int) -> np.ndarray:
        """Coverage count of every vertex's critical point at the radius."""
        n = self.n
        ch, td = self.locate(radius)
        p = np.asarray(self.parent, dtype=np.int64)[ch]
        dp = self.depth_np[p]
        b1 = radius + td
        b3 = radius + 2 * dp - td
        tq = np.concatenate([self.tout_np[ch], self.tin_np[ch]] * 2)
        xq = np.concatenate([b1, b1, b3, b3])
        pr = _prefix_counts(self.levels, self.stride, tq, xq)
        e1 = pr[0:n] - pr[n : 2 * n]
        e3 = pr[2 * n : 3 * n] - pr[3 * n : 4 * n]
        ball = self._ball(p, radius - (td - dp))
        return e1 + ball - e3


def _int_bfs(adj, src: int, n: int) -> np.ndarray:
    dist = np.zeros(n + 1, dtype=np.int64)
    seen = [False] * (n + 1)
    seen[src] = True
    queue = [src]
    for v in queue:
        for u, l in adj[v]:
            if not seen[u]:
                seen[u] = True
                dist[u] = dist[v] + l
                queue.append(u)
    return dist


def solve_unweighted_tree(g: Graph, k: int) -> Solution:
    """Optimal radius, center point and k-vertex witness block for a tree
    with unit vertex weights."""
    if not g.is_tree:
        raise InstanceError("unweighted tree solver requires a tree")
    if not g.unit_weights:
        raise InstanceError("unweighted tree solver requires unit vertex weights")
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} out of range for n={g.n}")
    if k == 1 or g.n == 1:
        return Solution(ZERO, vertex_point(g, 1), frozenset({1}))
    try:
        eng = _UnweightedEngine(g)
    except _ScaleOverflow:
        if g.n <= 1500:
            return solve_weighted_tree(g, k)
        raise InstanceError(
            "edge length denominators too large for the scaled solver"
        ) from None
    lo, hi = 0, eng.maxdepth
    if not (eng.counts(hi) >= k).any():
        raise InternalError("maximum radius probe found no k-point cover")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (eng.counts(mid) >= k).any():
            hi = mid
        else:
            lo = mid
    radius = hi
    cnt = eng.counts(radius)
    v_star = int(np.nonzero(cnt >= k)[0][0]) + 1
    td = max(eng.depth[v_star] - radius, 0)
    n = g.n
    if td == 0:
        center = vertex_point(g, 1)
        dist_np = eng.depth_np[1:]
    else:
        c = v_star
        for row in reversed(eng.ups):
            a = int(row[c])
            if a and eng.depth[a] > td:
                c = a
        p = eng.parent[c]
        off_p = td - eng.depth[p]
        e = g.edges[eng.eid[c]]
        tfp = Fraction(off_p, eng.sc2)
        t = tfp if e.u == p else e.length - tfp
        center = canonical_point(g, e.id, t)
        dp = _int_bfs(eng.adj, p, n)
        in_sub = (eng.tin_np[1:] >= eng.tin[c]) & (eng.tin_np[1:] < eng.tout[c])
        dist_np = np.where(in_sub, eng.depth_np[1:] - td, off_p + dp[1:])
    order = np.lexsort((eng.verts, dist_np))
    chosen = order[:k]
    if int(dist_np[chosen].max()) != radius:
        raise InternalError("witness selection does not realize the radius")
    lam = Fraction(radius, eng.sc2)
    subtree = frozenset(int(i) + 1 for i in chosen)
    return Solution(lam, center, subtree)


# ---------------------------------------------------------------- subsets


class _ShiftedView:
    """Sorted array plus a constant offset, O(1)-indexable."""

    __slots__ = ("base", "offset")

    def __init__(self, base, offset):
        self.base = base
        self.offset = offset

    def __len__(self) -> int:
        return len(self.base)

    def __getitem__(self, i):
        return self.base[i] + self.offset


@dataclass
class SortedDistanceSubsets:
    """Per-centroid sorted distance arrays over the degree-bounded copy of
    the tree; every vertex reads its distances to all other original
    vertices as O(log n) implicit shifted views."""

    n: int
    marked: tuple
    branch_arrays: list[tuple]
    cent_branches: dict[int, list[int]]
    chains: list[list[tuple[int, Fraction, int]]]

    def views(self, v: int) -> list:
        out: list = []
        for c, dvc, b in self.chains[v]:
            if c != v and self.marked[c]:
                out.append((dvc,))
            for b2 in self.cent_branches[c]:
                if b2 != b and self.branch_arrays[b2]:
                    out.append(_ShiftedView(self.branch_arrays[b2], dvc))
        return out

    def n_v(self, v: int) -> int:
        return len(self.views(v))


def build_distance_subsets(g: Graph) -> SortedDistanceSubsets:
    if not g.is_tree:
        raise InstanceError("distance subsets require a tree")
    bt = binarize(g)
    m = bt.n_all
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(m + 1)]
    for v in range(1, m + 1):
        p = bt.parent[v]
        if p:
            adj[p].append((v, bt.plen[v]))
            adj[v].append((p, bt.plen[v]))
    alive = [True] * (m + 1)
    chains: list[list[tuple[int, Fraction, int]]] = [[] for _ in range(m + 1)]
    branch_arrays: list[tuple] = [()]
    cent_branches: dict[int, list[int]] = {}
    stack = [bt.root]
    while stack:
        seed = stack.pop()
        if not alive[seed]:
            continue
        comp = [seed]
        par = {seed: 0}
        for v in comp:
            for u, _l in adj[v]:
                if alive[u] and u not in par:
                    par[u] = v
                    comp.append(u)
        size = dict.fromkeys(comp, 1)
        heavy = dict.fromkeys(comp, 0)
        for v in reversed(comp):
            p = par[v]
            if p:
                size[p] += size[v]
                heavy[p] = max(heavy[p], size[v])
        total = len(comp)
        c = min(comp, key=lambda v: (max(heavy[v], total - size[v]), v))
        dist: dict[int, Fraction] = {c: ZERO}
        branch = {c: 0}
        bfs = [c]
        members: dict[int, list[Fraction]] = {}
        for v in bfs:
            for u, l in adj[v]:
                if alive[u] and u not in dist:
                    dist[u] = dist[v] + l
                    if v == c:
                        branch_arrays.append(())
                        branch[u] = len(branch_arrays) - 1
                        members[branch[u]] = []
                    else:
                        branch[u] = branch[v]
                    bfs.append(u)
        for v in bfs:
            chains[v].append((c, dist[v], branch[v]))
            if branch[v] and bt.marked[v]:
                members[branch[v]].append(dist[v])
        for b, vals in members.items():
            branch_arrays[b] = tuple(sorted(vals))
        cent_branches[c] = sorted(members)
        alive[c] = False
        for u, _l in adj[c]:
            if alive[u]:
                stack.append(u)
    return SortedDistanceSubsets(
        g.n, tuple(bt.marked), branch_arrays, cent_branches, chains
    )


def _view_bisect(a, x, lo: int, hi: int, left: bool) -> int:
    while lo < hi:
        mid = (lo + hi) // 2
        v = a[mid]
        if v < x or (not left and v == x):
            lo = mid + 1
        else:
            hi = mid
    return lo


def kth_smallest_sorted_arrays(views: Sequence, k: int):
    """k-th smallest element of the multiset union of sorted
    O(1)-indexable arrays, by rank-counting value search."""
    total = sum(len(a) for a in views)
    if not 1 <= k <= total:
        raise ValueError(f"k={k} outside 1..{total}")
    lo = [0] * len(views)
    hi = [len(a) for a in views]
    kk = k
    while True:
        active = sum(h - l for l, h in zip(lo, hi))
        if active <= 64:
            rest = sorted(
                a[i] for a, l, h in zip(views, lo, hi) for i in range(l, h)
            )
            return rest[kk - 1]
        mids = sorted(
            (a[(l + h) // 2], h - l)
            for a, l, h in zip(views, lo, hi)
            if h > l
        )
        acc = 0
        pivot = mids[-1][0]
        for val, wt in mids:
            acc += wt
            if 2 * acc >= active:
                pivot = val
                break
        pos_l = [_view_bisect(a, pivot, l, h, True) for a, l, h in zip(views, lo, hi)]
        pos_r = [_view_bisect(a, pivot, l, h, False) for a, l, h in zip(views, lo, hi)]
        cnt_lt = sum(pl - l for pl, l in zip(pos_l, lo))
        cnt_le = sum(pr - l for pr, l in zip(pos_r, lo))
        if kk <= cnt_lt:
            hi = pos_l
        elif kk <= cnt_le:
            return pivot
        else:
            kk -= cnt_le
            lo = pos_r


def kth_distance_from(sds: SortedDistanceSubsets, v: int, k: int):
    """k-th smallest distance from v to the other vertices."""
    return kth_smallest_sorted_arrays(sds.views(v), k)
