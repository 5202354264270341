"""Generalized k-th level of unit-slope distance chains, and the
unweighted general-graph solver built on it.

On an edge (r, s) of an unweighted graph, each vertex v traces the chain
y = min(d(v,r) + t, d(v,s) + l - t): a rising segment, a falling segment,
or both joined at an interior peak.  The k-th level is the x-monotone
zigzag whose value at every t is the k-th smallest chain value; its
lowest point on the best edge realizes the optimal radius.

The level is built by one left-to-right sweep over two sequence arrays:
rising segments grouped by their common line (descending offset) and
falling segments likewise (ascending x-intercept).  While riding a line
the sweep tracks f, the number of chains not above that line, updating
it only at intersections with lines of the opposite slope, and turns as
soon as (falling) continuing would push f below k, or (rising) turning
keeps at least k chains not above the new line.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .graph_core import (
    ZERO,
    DistanceMatrix,
    Graph,
    InstanceError,
    InternalError,
    Solution,
    all_pairs_distances,
    canonical_point,
    vertex_point,
)
from .general_feasibility import covered_subtree, trim_witness

X_SHAPE = "x"
Y_SHAPE = "y"
PEAK_SHAPE = "peak"

_ONE = Fraction(1)


@dataclass(frozen=True)
class Chain:
    """Distance chain of one vertex along an edge: value_at(t) is the
    vertex's distance to the point at offset t."""

    vertex: int
    left: Fraction
    right: Fraction
    length: Fraction
    shape: str
    apex: Optional[Fraction] = None

    def value_at(self, t: Fraction) -> Fraction:
        return min(self.left + t, self.right + self.length - t)


@dataclass(frozen=True)
class ChainSet:
    chains: tuple[Chain, ...]
    length: Fraction
    edge: int = -1


def build_chains(g: Graph, dm: DistanceMatrix, edge: int) -> ChainSet:
    if not g.unit_weights:
        raise InstanceError("distance chains are defined for unit weights only")
    e = g.edges[edge]
    l = e.length
    chains = []
    for v in g.vertices():
        dr = dm.d(v, e.u)
        ds = dm.d(v, e.v)
        if ds == dr + l:
            chains.append(Chain(v, dr, ds, l, X_SHAPE))
        elif dr == ds + l:
            chains.append(Chain(v, dr, ds, l, Y_SHAPE))
        else:
            apex = (ds + l - dr) / 2
            if not ZERO < apex < l:
                raise InternalError(f"peak of vertex {v} not interior to edge {edge}")
            chains.append(Chain(v, dr, ds, l, PEAK_SHAPE, apex))
    return ChainSet(tuple(chains), l, edge)


@dataclass(frozen=True)
class XSegment:
    """Rising piece on line y = t + line_offset, from (0, line_offset) to
    its right endpoint."""

    vertex: int
    line: Fraction
    right_x: Fraction
    right_y: Fraction


@dataclass(frozen=True)
class YSegment:
    """Falling piece on line y = -t + intercept, from its left endpoint to
    (length, intercept - length)."""

    vertex: int
    intercept: Fraction
    left_x: Fraction
    left_y: Fraction


@dataclass(frozen=True)
class SegmentSequences:
    """splus: rising segments grouped by line, groups in ascending
    x-intercept order (descending offset), each group sorted by descending
    right-endpoint height.  sminus: falling segments grouped by line in
    ascending x-intercept order, each sorted by descending left-endpoint
    height.  The first segment of a group is always its longest."""

    splus: tuple[tuple[XSegment, ...], ...]
    sminus: tuple[tuple[YSegment, ...], ...]


def segment_sequences(cs: ChainSet) -> SegmentSequences:
    l = cs.length
    plus: dict[Fraction, list[XSegment]] = {}
    minus: dict[Fraction, list[YSegment]] = {}
    for ch in cs.chains:
        if ch.shape in (X_SHAPE, PEAK_SHAPE):
            rx = l if ch.shape == X_SHAPE else ch.apex
            plus.setdefault(ch.left, []).append(
                XSegment(ch.vertex, ch.left, rx, ch.left + rx)
            )
        if ch.shape in (Y_SHAPE, PEAK_SHAPE):
            c = ch.right + l
            lx = ZERO if ch.shape == Y_SHAPE else ch.apex
            minus.setdefault(c, []).append(YSegment(ch.vertex, c, lx, c - lx))
    splus = tuple(
        tuple(sorted(v, key=lambda s: (-s.right_y, s.vertex)))
        for _, v in sorted(plus.items(), key=lambda kv: -kv[0])
    )
    sminus = tuple(
        tuple(sorted(v, key=lambda s: (-s.left_y, s.vertex)))
        for _, v in sorted(minus.items())
    )
    return SegmentSequences(splus, sminus)


@dataclass(frozen=True)
class LevelChain:
    """x-monotone zigzag; vertices are the turn points plus both edge
    endpoints, segment slopes alternating between -1 and +1."""

    vertices: tuple[tuple[Fraction, Fraction], ...]
    length: Fraction

    @cached_property
    def _xs(self) -> list[Fraction]:
        return [x for x, _ in self.vertices]

    def value_at(self, t: Fraction) -> Fraction:
        if not ZERO <= t <= self.length:
            raise ValueError(f"offset {t} outside [0, {self.length}]")
        i = bisect_right(self._xs, t) - 1
        if i == len(self.vertices) - 1:
            return self.vertices[-1][1]
        x0, y0 = self.vertices[i]
        y1 = self.vertices[i + 1][1]
        slope = _ONE if y1 > y0 else -_ONE
        return y0 + slope * (t - x0)

    def lowest(self) -> tuple[Fraction, Fraction]:
        y, x = min((y, x) for x, y in self.vertices)
        return x, y

    def to_json(self) -> list[list[str]]:
        return [[str(x), str(y)] for x, y in self.vertices]


def _rights_above(seq: tuple[XSegment, ...], y: Fraction) -> int:
    """Number of segments whose right endpoint is strictly higher than y
    (seq sorted by descending right_y)."""
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid].right_y > y:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _lefts_above(seq: tuple[YSegment, ...], y: Fraction) -> int:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid].left_y > y:
            lo = mid + 1
        else:
            hi = mid
    return lo


def kth_level(cs: ChainSet, k: int) -> LevelChain:
    """k-th level of the chain set: at every offset t its value equals the
    k-th smallest chain value."""
    n = len(cs.chains)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    l = cs.length
    seqs = segment_sequences(cs)
    sp, sm = seqs.splus, seqs.sminus
    # line parameters per group, for cursor placement by binary search
    sp_neg_off = [-grp[0].line for grp in sp]  # ascending
    sm_int = [grp[0].intercept for grp in sm]  # ascending
    sp_index = {grp[0].line: i for i, grp in enumerate(sp)}
    sm_index = {grp[0].intercept: i for i, grp in enumerate(sm)}

    at0 = sorted(ch.left for ch in cs.chains)
    y1 = at0[k - 1]
    f0 = bisect_right(at0, y1)
    n_below = bisect_left(at0, y1)
    n_fall_at = sum(1 for ch in cs.chains if ch.shape == Y_SHAPE and ch.left == y1)
    ip = sp_index.get(y1)
    im = sm_index.get(y1)

    vertices: list[tuple[Fraction, Fraction]] = [(ZERO, y1)]
    fprime = f0
    pprime = (ZERO, y1)

    RISING, FALLING = 0, 1
    if n_below + n_fall_at >= k:
        # enough mass on and below the falling line just right of t=0
        if im is None:
            raise InternalError("level starts falling but no falling group at start")
        mode, cur = FALLING, im
        pend_seq = sp[ip] if ip is not None else None
        pend_idx = ip
        sp_cur = (ip + 1) if ip is not None else bisect_right(sp_neg_off, -y1)
        sm_cur = 0  # reassigned at the first turn
        jp = 0
    else:
        if ip is None:
            raise InternalError("level starts rising but no rising group at start")
        mode, cur = RISING, ip
        jp = _rights_above(sp[ip], y1)
        sm_cur = (im + 1) if im is not None else bisect_right(sm_int, y1)
        sp_cur = 0
        pend_seq = None
        pend_idx = None

    guard = 0
    limit = 8 * (len(sp) + len(sm) + 4) * (n + 4)
    while True:
        guard += 1
        if guard > limit:
            raise InternalError("level sweep failed to terminate")
        if mode == RISING:
            seq = sp[cur]
            a = seq[0].line
            xr0 = seq[0].right_x
            start_x = vertices[-1][0]
            turned = False
            while sm_cur < len(sm):
                cseq = sm[sm_cur]
                c = cseq[0].intercept
                x_int = (c - a) / 2
                if x_int <= start_x:
                    sm_cur += 1
                    continue
                if x_int > xr0 or x_int < cseq[0].left_x or x_int > l:
                    # even the longest pieces miss each other
                    sm_cur += 1
                    continue
                y_int = (c + a) / 2
                adds = _lefts_above(cseq, y_int)
                f_at = fprime + adds
                while jp > 0 and seq[jp - 1].right_y <= y_int:
                    jp -= 1
                if f_at - jp >= k:
                    # the falling line through here keeps at least k chains
                    # not above it, so the level turns now
                    vertices.append((x_int, y_int))
                    fprime = f_at
                    pprime = (x_int, y_int)
                    pend_seq = seq
                    pend_idx = cur
                    sp_cur = cur + 1
                    mode, cur = FALLING, sm_cur
                    turned = True
                    break
                fprime = f_at
                pprime = (x_int, y_int)
                sm_cur += 1
            if not turned:
                vertices.append((l, a + l))
                break
        else:
            cseq = sm[cur]
            c = cseq[0].intercept
            xl0 = cseq[0].left_x
            start_x = vertices[-1][0]
            turned = False
            ran_out = False
            while True:
                if sp_cur >= len(sp):
                    ran_out = True
                else:
                    seq = sp[sp_cur]
                    a = seq[0].line
                    x_int = (c - a) / 2
                    if x_int <= start_x:
                        sp_cur += 1
                        continue
                    if x_int < xl0 or x_int > seq[0].right_x or x_int > l:
                        sp_cur += 1
                        continue
                drop = (
                    _rights_above(pend_seq, pprime[1]) if pend_seq is not None else 0
                )
                f_at = fprime - drop
                if f_at < k:
                    # continuing past the last crossing starves the line;
                    # the level turned there, onto the group that crossed it
                    if pend_seq is None or pend_idx is None:
                        raise InternalError("level must turn but has no rising group")
                    vertices.append(pprime)
                    jp = drop
                    sm_cur = cur + 1
                    sp_cur = pend_idx + 1
                    mode, cur = RISING, pend_idx
                    turned = True
                    break
                if ran_out:
                    break
                fprime = f_at
                pprime = ((c - a) / 2, (c + a) / 2)
                pend_seq = seq
                pend_idx = sp_cur
                sp_cur += 1
            if not turned and ran_out:
                vertices.append((l, c - l))
                break

    out = [vertices[0]]
    for p in vertices[1:]:
        if p != out[-1]:
            out.append(p)
    if out[0][0] != ZERO or out[-1][0] != l:
        raise InternalError("level does not span the edge")
    slopes = []
    for (x0, y0), (x1, yv1) in zip(out, out[1:]):
        if x1 <= x0:
            raise InternalError("level vertices not strictly x-monotone")
        s = (yv1 - y0) / (x1 - x0)
        if s != _ONE and s != -_ONE:
            raise InternalError("level segment with non-unit slope")
        slopes.append(s)
    for s0, s1 in zip(slopes, slopes[1:]):
        if s0 == s1:
            raise InternalError("level alternation violated")
    return LevelChain(tuple(out), l)


def solve_unweighted_graph(g: Graph, k: int) -> Solution:
    """Optimal radius over all k-vertex connected subtrees of an
    unweighted graph, by taking each edge's k-th level at its lowest
    point.  Ties go to the smallest edge id, then the smallest offset."""
    if not g.unit_weights:
        raise InstanceError("unweighted solver requires unit vertex weights")
    if not 1 <= k <= g.n:
        raise ValueError(f"k={k} outside 1..{g.n}")
    if k == 1 or g.n == 1:
        return Solution(ZERO, vertex_point(g, 1), frozenset({1}))
    dm = all_pairs_distances(g)
    best = None
    for e in g.edges:
        level = kth_level(build_chains(g, dm, e.id), k)
        x, y = level.lowest()
        key = (y, e.id, x)
        if best is None or key < best:
            best = key
    lam, eid, t = best
    center = canonical_point(g, eid, t)
    covered = covered_subtree(g, dm, center, lam)
    subtree = trim_witness(g, dm, center, covered, k)
    return Solution(lam, center, subtree)
