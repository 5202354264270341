"""Brute-force reference implementations.

Everything here recomputes answers from first principles with naive
algorithms and shares no code with the production solvers, so tests can
compare the two sides.  Caps keep runtimes sane; these are not meant to
scale.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from .graph_core import (
    ZERO,
    DistanceMatrix,
    EdgePoint,
    Graph,
    all_pairs_distances,
    edge_profile,
    point_distance,
)


def brute_covered_set(g: Graph, dm: DistanceMatrix, x: EdgePoint, lam: Fraction) -> frozenset[int]:
    """Vertices covered from x at radius lam: light vertices reachable from x
    along some shortest path whose every vertex is itself light.

    Computed as a shrinking fixpoint: start from all light vertices, then
    repeatedly drop any vertex with no surviving predecessor.
    """
    if lam < 0:
        return frozenset()
    if x.edge < 0:  # single-vertex graph
        return frozenset({1})
    e = g.edges[x.edge]
    d_x = [ZERO] * (g.n + 1)
    for v in g.vertices():
        d_x[v] = point_distance(g, dm, x, v)
    alive = {v for v in g.vertices() if g.weights[v] * d_x[v] <= lam}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if v == e.u and x.t == d_x[v]:
                continue  # reached directly along the edge segment
            if v == e.v and e.length - x.t == d_x[v]:
                continue
            ok = False
            for u, ev in g.adj[v]:
                if u in alive and d_x[u] + ev.length == d_x[v]:
                    ok = True
                    break
            if not ok:
                alive.discard(v)
                changed = True
    return frozenset(alive)


def brute_coverage_count(g: Graph, dm: DistanceMatrix, x: EdgePoint, lam: Fraction) -> int:
    return len(brute_covered_set(g, dm, x, lam))


def _piece_lines(fn) -> list[tuple[Fraction, Fraction]]:
    """The one or two lines y = m*t + b supporting the weighted distance on an edge."""
    w = fn.weight
    lines = []
    if fn.case in ("increasing", "peak"):
        lines.append((w, w * fn.d_r))
    if fn.case in ("decreasing", "peak"):
        lines.append((-w, w * (fn.d_s + fn.length)))
    return lines


def edge_probe_points(g: Graph, dm: DistanceMatrix, edge: int, lam: Fraction) -> list[Fraction]:
    """Probe offsets on one edge that are guaranteed to include every
    breakpoint of the coverage-size function at radius lam: endpoints,
    semicircular points, pairwise crossings of the distance functions,
    crossings with the horizontal line y = lam, and interval midpoints.
    """
    e = g.edges[edge]
    l = e.length
    profile = edge_profile(g, dm, edge)
    ts = {ZERO, l}
    all_lines: list[tuple[Fraction, Fraction]] = []
    for v in g.vertices():
        fn = profile[v]
        if fn.semicircular_t is not None:
            ts.add(fn.semicircular_t)
        for m, b in _piece_lines(fn):
            all_lines.append((m, b))
            if m != 0 and lam >= 0:
                t = (lam - b) / m
                if 0 <= t <= l:
                    ts.add(t)
    for (m1, b1), (m2, b2) in itertools.combinations(all_lines, 2):
        if m1 != m2:
            t = (b2 - b1) / (m1 - m2)
            if 0 <= t <= l:
                ts.add(t)
    out = sorted(ts)
    mids = [(a + b) / 2 for a, b in zip(out, out[1:])]
    return sorted(set(out + mids))


def brute_feasible(g: Graph, k: int, lam: Fraction, dm: DistanceMatrix | None = None) -> bool:
    """True iff some point of the graph covers at least k vertices at radius lam."""
    if lam < 0:
        return False
    if g.n == 1:
        return k <= 1
    if dm is None:
        dm = all_pairs_distances(g)
    for e in g.edges:
        for t in edge_probe_points(g, dm, e.id, lam):
            if brute_coverage_count(g, dm, EdgePoint(e.id, t), lam) >= k:
                return True
    return False


def candidate_values(g: Graph, dm: DistanceMatrix | None = None) -> list[Fraction]:
    """Sorted candidate optimal values: every pairwise intersection ordinate of
    the per-edge line family (distance-function pieces plus verticals at the
    endpoints and semicircular points).  The optimum is always in this set.
    """
    if dm is None:
        dm = all_pairs_distances(g)
    vals: set[Fraction] = {ZERO}
    for e in g.edges:
        l = e.length
        profile = edge_profile(g, dm, e.id)
        lines: list[tuple[Fraction, Fraction]] = []
        verts = {ZERO, l}
        for v in g.vertices():
            fn = profile[v]
            lines.extend(_piece_lines(fn))
            if fn.semicircular_t is not None:
                verts.add(fn.semicircular_t)
        for (m1, b1), (m2, b2) in itertools.combinations(lines, 2):
            if m1 != m2:
                t = (b2 - b1) / (m1 - m2)
                if 0 <= t <= l:
                    y = m1 * t + b1
                    if y >= 0:
                        vals.add(y)
        for tv in verts:
            for m, b in lines:
                y = m * tv + b
                if y >= 0:
                    vals.add(y)
    return sorted(vals)


def brute_lambda(g: Graph, k: int, n_cap: int = 14) -> Fraction:
    """Smallest feasible candidate value, by binary search over the candidate set."""
    if g.n > n_cap:
        raise ValueError(f"brute_lambda capped at n={n_cap}, got {g.n}")
    if k == 1 or g.n == 1:
        return ZERO
    dm = all_pairs_distances(g)
    vals = candidate_values(g, dm)
    lo, hi = 0, len(vals) - 1
    if not brute_feasible(g, k, vals[hi], dm):
        raise AssertionError("largest candidate must be feasible")
    while lo < hi:
        mid = (lo + hi) // 2
        if brute_feasible(g, k, vals[mid], dm):
            hi = mid
        else:
            lo = mid + 1
    return vals[lo]


def brute_kth_level(chains: Iterable, k: int, x: Fraction) -> Fraction:
    """k-th smallest chain value at abscissa x (chains expose value_at)."""
    vals = sorted(c.value_at(x) for c in chains)
    if not 1 <= k <= len(vals):
        raise ValueError(f"k={k} out of range for {len(vals)} chains")
    return vals[k - 1]


def weighted_diameter(g: Graph, dm: DistanceMatrix, vs: Sequence[int]) -> Fraction:
    """max over pairs of w_u * w_v * d(u,v) / (w_u + w_v); zero for singletons."""
    best = ZERO
    for u, v in itertools.combinations(vs, 2):
        wu, wv = g.weights[u], g.weights[v]
        val = wu * wv * dm.d(u, v) / (wu + wv)
        if val > best:
            best = val
    return best


def brute_min_diameter_ksubtree(
    g: Graph, k: int, n_cap: int = 12, k_cap: int = 6
) -> tuple[Fraction, frozenset[int]]:
    """Minimum weighted diameter over all k-vertex tree subgraphs of g, by
    enumerating vertex subsets and every spanning tree of each induced
    subgraph.  The diameter is measured inside the chosen tree, not in g;
    on trees the two coincide.  Lexicographically smallest witness on ties.
    """
    if g.n > n_cap or k > k_cap:
        raise ValueError(f"capped at n={n_cap}, k={k_cap}; got n={g.n}, k={k}")
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} out of range")
    best: tuple[Fraction, tuple[int, ...]] | None = None
    for combo in itertools.combinations(g.vertices(), k):
        inset = set(combo)
        pool = [e for e in g.edges if e.u in inset and e.v in inset]
        if len(pool) < k - 1:
            continue
        for pick in itertools.combinations(pool, k - 1):
            root = {v: v for v in combo}

            def find(v):
                while root[v] != v:
                    root[v] = root[root[v]]
                    v = root[v]
                return v

            acyclic = True
            for e in pick:
                ru, rv = find(e.u), find(e.v)
                if ru == rv:
                    acyclic = False
                    break
                root[ru] = rv
            if not acyclic:
                continue
            # k-1 acyclic edges on k vertices form a spanning tree
            adj: dict[int, list[tuple[int, Fraction]]] = {v: [] for v in combo}
            for e in pick:
                adj[e.u].append((e.v, e.length))
                adj[e.v].append((e.u, e.length))
            w = ZERO
            for s in combo:
                dist = {s: ZERO}
                stack = [s]
                while stack:
                    v = stack.pop()
                    for u, l in adj[v]:
                        if u not in dist:
                            dist[u] = dist[v] + l
                            stack.append(u)
                for u in combo:
                    if u <= s:
                        continue
                    val = g.weights[u] * g.weights[s] * dist[u] / (
                        g.weights[u] + g.weights[s])
                    if val > w:
                        w = val
            cand = (w, combo)
            if best is None or cand < best:
                best = cand
    assert best is not None  # the graph is connected, some k-subtree works
    return best[0], frozenset(best[1])
