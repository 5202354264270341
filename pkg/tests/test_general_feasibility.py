import random
from fractions import Fraction as F

import pytest

from conftest import random_graph
from ckoc.general_feasibility import (
    FeasibilityTester,
    build_predecessor_structure,
    coverage_profile,
    covered_subtree,
    is_feasible_graph,
    remove_set_and_descendants,
)
from ckoc.graph_core import EdgePoint, all_pairs_distances, vertex_point
from ckoc.oracle import brute_coverage_count, brute_covered_set, candidate_values


def ps_sets(ps):
    pred = {v: set(us) for v, us in ps.pred.items() if us}
    succ = {v: set(us) for v, us in ps.succ.items() if us}
    return pred, succ


def test_predecessors_path_from_endpoint(path3):
    dm = all_pairs_distances(path3)
    ps = build_predecessor_structure(path3, dm, vertex_point(path3, 1))
    pred, succ = ps_sets(ps)
    assert pred == {2: {1}, 3: {2}}
    assert succ == {1: {2}, 2: {3}}


def test_predecessors_two_paths(cycle4):
    dm = all_pairs_distances(cycle4)
    ps = build_predecessor_structure(cycle4, dm, vertex_point(cycle4, 1))
    pred, _ = ps_sets(ps)
    assert pred[3] == {2, 4}


def test_predecessors_interior_dummy(path3):
    dm = all_pairs_distances(path3)
    ps = build_predecessor_structure(path3, dm, EdgePoint(0, F(1, 2)))
    pred, _ = ps_sets(ps)
    assert pred == {1: {0}, 2: {0}, 3: {2}}
    assert ps.root == 0


def test_remove_cut_vertex(path3):
    dm = all_pairs_distances(path3)
    ps = build_predecessor_structure(path3, dm, vertex_point(path3, 1))
    desc, residual = remove_set_and_descendants(ps, {2})
    assert desc == {3}
    assert residual == {1}


def test_remove_survives_alternate_paths(cycle4):
    dm = all_pairs_distances(cycle4)
    ps = build_predecessor_structure(cycle4, dm, vertex_point(cycle4, 1))
    desc, residual = remove_set_and_descendants(ps, {2})
    assert desc == set()
    assert residual == {1, 3, 4}


def test_remove_both_predecessors(cycle4):
    dm = all_pairs_distances(cycle4)
    ps = build_predecessor_structure(cycle4, dm, vertex_point(cycle4, 1))
    desc, residual = remove_set_and_descendants(ps, {2, 4})
    assert desc == {3}
    assert residual == {1}


def test_remove_identity_and_total(cycle4):
    dm = all_pairs_distances(cycle4)
    ps = build_predecessor_structure(cycle4, dm, vertex_point(cycle4, 1))
    desc, residual = remove_set_and_descendants(ps, set())
    assert desc == set() and residual == {1, 2, 3, 4}
    desc, residual = remove_set_and_descendants(ps, {1, 2, 3, 4})
    assert desc == set() and residual == set()


def test_remove_root_takes_everything(path3):
    dm = all_pairs_distances(path3)
    ps = build_predecessor_structure(path3, dm, vertex_point(path3, 1))
    desc, residual = remove_set_and_descendants(ps, {1})
    assert desc == {2, 3}
    assert residual == set()


def test_profile_path3_small_radius(path3):
    dm = all_pairs_distances(path3)
    prof = coverage_profile(path3, dm, 0, F(1, 2))
    assert prof.value_at(F(1, 2)) == 2
    assert prof.value_at(F(0)) == 1
    assert prof.value_at(F(1)) == 1
    assert prof.value_at(F(1, 4)) == 1
    assert prof.value_at(F(3, 4)) == 1
    assert prof.max_value() == 2


def test_profile_path3_radius_one(path3):
    dm = all_pairs_distances(path3)
    prof = coverage_profile(path3, dm, 0, F(1))
    assert prof.value_at(F(0)) == 2
    assert prof.value_at(F(1)) == 3
    assert prof.value_at(F(1, 2)) == 2


def test_profile_wedge2(wedge2):
    # cover both vertices: 2t <= 4 and 6 - t <= 4, so only t = 2 reaches 2
    dm = all_pairs_distances(wedge2)
    prof = coverage_profile(wedge2, dm, 0, F(4))
    assert prof.value_at(F(2)) == 2
    for t in (F(0), F(1), F(3), F(7, 2), F(4), F(5), F(6)):
        assert prof.value_at(t) == 1, t


def test_feasible_examples(path3, wedge2):
    dm = all_pairs_distances(path3)
    res = is_feasible_graph(path3, dm, 2, F(1, 2))
    assert res.feasible
    x, vs = res.witness
    assert x == EdgePoint(0, F(1, 2)) and vs == {1, 2}
    assert not is_feasible_graph(path3, dm, 2, F(499, 1000)).feasible

    dw = all_pairs_distances(wedge2)
    res = is_feasible_graph(wedge2, dw, 2, F(4))
    assert res.feasible and res.witness[0] == EdgePoint(0, F(2))
    assert res.witness[1] == {1, 2}
    assert not is_feasible_graph(wedge2, dw, 2, F(39, 10)).feasible


def test_witness_matches_oracle_and_radius():
    rng = random.Random(101)
    for _ in range(12):
        g = random_graph(rng, rng.randint(2, 8), extra=rng.randint(0, 4), weighted=rng.random() < 0.5)
        dm = all_pairs_distances(g)
        k = rng.randint(1, g.n)
        vals = candidate_values(g, dm)
        lam = vals[rng.randrange(len(vals))]
        res = is_feasible_graph(g, dm, k, lam)
        if res.feasible:
            x, vs = res.witness
            assert len(vs) >= k
            assert vs == brute_covered_set(g, dm, x, lam)
            from ckoc.graph_core import point_distance

            assert all(g.weights[v] * point_distance(g, dm, x, v) <= lam for v in vs)


def test_profile_matches_oracle_random():
    rng = random.Random(61)
    for _ in range(10):
        g = random_graph(rng, rng.randint(2, 8), extra=rng.randint(0, 4), weighted=rng.random() < 0.5)
        dm = all_pairs_distances(g)
        vals = candidate_values(g, dm)
        lam = vals[rng.randrange(len(vals))]
        if rng.random() < 0.3:
            lam += F(1, 17)
        for e in g.edges:
            prof = coverage_profile(g, dm, e.id, lam)
            for _ in range(12):
                t = e.length * F(rng.randint(0, 24), 24)
                want = brute_coverage_count(g, dm, EdgePoint(e.id, t), lam)
                assert prof.value_at(t) == want, (e.id, t, lam)


def test_profile_matches_oracle_at_own_breakpoints():
    rng = random.Random(67)
    for _ in range(8):
        g = random_graph(rng, rng.randint(3, 8), extra=rng.randint(0, 3), weighted=True)
        dm = all_pairs_distances(g)
        vals = candidate_values(g, dm)
        lam = vals[len(vals) // 2]
        for e in g.edges:
            prof = coverage_profile(g, dm, e.id, lam)
            prev = None
            for t, left, at in prof.breakpoints:
                assert brute_coverage_count(g, dm, EdgePoint(e.id, t), lam) == at
                if prev is not None:
                    mid = (prev + t) / 2
                    assert brute_coverage_count(g, dm, EdgePoint(e.id, mid), lam) == left
                prev = t


def test_feasibility_monotone_random():
    rng = random.Random(71)
    for _ in range(8):
        g = random_graph(rng, rng.randint(2, 7), extra=rng.randint(0, 3), weighted=rng.random() < 0.5)
        dm = all_pairs_distances(g)
        k = rng.randint(1, g.n)
        vals = candidate_values(g, dm)
        picks = sorted(rng.sample(vals, min(6, len(vals))))
        flags = [is_feasible_graph(g, dm, k, lam).feasible for lam in picks]
        assert flags == sorted(flags)


def test_side_scan_monotone(path3, cycle4):
    for g in (path3, cycle4):
        dm = all_pairs_distances(g)
        tester = FeasibilityTester(g, dm)
        for e in g.edges:
            for lam in (F(1, 2), F(1), F(3, 2)):
                for from_r in (True, False):
                    _, values, _ = tester._side_scan(e.id, from_r, lam)
                    assert values == sorted(values, reverse=True)


def test_covered_subtree_matches_oracle():
    rng = random.Random(79)
    for _ in range(10):
        g = random_graph(rng, rng.randint(2, 8), extra=rng.randint(0, 4), weighted=True)
        dm = all_pairs_distances(g)
        e = g.edges[rng.randrange(g.m)]
        t = e.length * F(rng.randint(0, 8), 8)
        x = EdgePoint(e.id, t)
        lam = F(rng.randint(0, 40), 8)
        assert covered_subtree(g, dm, x, lam) == brute_covered_set(g, dm, x, lam)
