import random
from fractions import Fraction

import pytest

from ckoc.graph_core import Graph


@pytest.fixture
def path3() -> Graph:
    return Graph.unit(3, [(1, 2), (2, 3)])


@pytest.fixture
def wedge2() -> Graph:
    # single edge of length 6, weights 2 and 1
    return Graph(2, [2, 1], [(1, 2, 6)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.unit(3, [(1, 2), (2, 3), (1, 3)])


@pytest.fixture
def cycle4() -> Graph:
    return Graph.unit(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.fixture
def path5() -> Graph:
    return Graph.unit(5, [(1, 2), (2, 3), (3, 4), (4, 5)])


@pytest.fixture
def star3() -> Graph:
    return Graph.unit(4, [(1, 2), (1, 3), (1, 4)])


def rand_rational(rng: random.Random, lo: int = 1, hi: int = 8, dens=(1, 1, 2, 4)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def random_tree_edges(rng: random.Random, n: int):
    return [(rng.randint(1, v - 1), v) for v in range(2, n + 1)]


def random_graph(rng: random.Random, n: int, extra: int = 0, weighted: bool = False) -> Graph:
    """Random connected graph: spanning tree plus `extra` chords."""
    tree = random_tree_edges(rng, n)
    present = {tuple(sorted(e)) for e in tree}
    pool = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if (u, v) not in present
    ]
    chords = rng.sample(pool, min(extra, len(pool)))
    edges = [(u, v, rand_rational(rng)) for u, v in tree + chords]
    if weighted:
        weights = [rand_rational(rng) for _ in range(n)]
    else:
        weights = [Fraction(1)] * n
    return Graph(n, weights, edges)


def random_tree(rng: random.Random, n: int, weighted: bool = False) -> Graph:
    return random_graph(rng, n, extra=0, weighted=weighted)
