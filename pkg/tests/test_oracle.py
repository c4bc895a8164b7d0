import random
from itertools import combinations

import networkx as nx
import pytest

from helpers import C6, K3, K4, P3, TWO_C3, complete, cycle, empty, random_graph, relabeled, star
from setwl.cfi import cfi_pair
from setwl.errors import GuardExceeded
from setwl.graph import ColoredGraph
from setwl.oracle import PATTERNS, brute_force_isomorphic, count_pattern, enumerate_kc_sets


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from((v, {"c": c}) for v, c in enumerate(g.colors))
    h.add_edges_from(g.edges)
    return h


def test_isomorphism_examples():
    assert not brute_force_isomorphic(C6, TWO_C3)
    rng = random.Random(0)
    assert brute_force_isomorphic(C6, relabeled(rng, C6))
    a, b = cfi_pair(3)
    assert not brute_force_isomorphic(a.graph, b.graph)


def test_isomorphism_agrees_with_networkx():
    rng = random.Random(1)
    for _ in range(150):
        n = rng.randint(1, 9)
        a = random_graph(rng, n, 0.4, colors=rng.choice([1, 2]))
        b = relabeled(rng, a) if rng.random() < 0.5 else random_graph(rng, n, 0.4, colors=rng.choice([1, 2]))
        expected = nx.is_isomorphic(_nx(a), _nx(b), node_match=lambda x, y: x["c"] == y["c"])
        assert brute_force_isomorphic(a, b) == expected


def test_colors_matter():
    a = ColoredGraph.from_edges(2, [(0, 1)], [0, 1])
    b = ColoredGraph.from_edges(2, [(0, 1)], [0, 0])
    assert not brute_force_isomorphic(a, b)


def test_enumeration_examples():
    assert enumerate_kc_sets(P3, 2, 1) == [(0,), (1,), (2,), (0, 1), (1, 2)]
    assert len(enumerate_kc_sets(empty(3), 2, 2)) == 6
    assert len(enumerate_kc_sets(K3, 3, 1)) == 7
    with pytest.raises(GuardExceeded):
        enumerate_kc_sets(empty(21), 2, 1)


def test_pattern_counts_closed_forms():
    assert count_pattern(K4, "triangle") == 4
    assert count_pattern(K4, "cycle4") == 3
    assert count_pattern(C6, "cycle4") == 0
    assert count_pattern(star(5), "star3") == 10
    assert count_pattern(complete(6), "star3") == 6 * 10
    assert count_pattern(complete(5), "tailed_triangle") == 10 * 3 * 2
    assert count_pattern(cycle(4), "cycle4") == 1


def _count_by_subsets(g, pattern):
    """Independent count: for every node subset, count edge subsets forming the pattern."""
    p, pedges = PATTERNS[pattern]
    target = _nx(ColoredGraph.from_edges(p, pedges))
    total = 0
    for nodes in combinations(range(g.n), p):
        inner = [e for e in g.edges if e[0] in nodes and e[1] in nodes]
        for es in combinations(inner, len(pedges)):
            h = nx.Graph(list(es))
            if h.number_of_nodes() == p and nx.is_isomorphic(h, target):
                total += 1
    return total


@pytest.mark.parametrize("pattern", sorted(PATTERNS))
def test_pattern_counts_match_subset_enumeration(pattern):
    rng = random.Random(2)
    for _ in range(8):
        g = random_graph(rng, rng.randint(4, 7), 0.5)
        expected = _count_by_subsets(g, pattern)
        assert count_pattern(g, pattern) == expected
        assert count_pattern(relabeled(rng, g), pattern) == expected


def test_unknown_pattern():
    with pytest.raises(ValueError):
        count_pattern(K3, "pentagon")
