"""Shared graph fixtures and random corpora for the test suite."""

from __future__ import annotations

import random
from itertools import combinations, product

from setwl.graph import ColoredGraph, permute_graph
from setwl.oracle import brute_force_isomorphic


def path(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, combinations(range(n), 2))


def empty(n: int) -> ColoredGraph:
    return ColoredGraph.from_edges(n, [])


def star(leaves: int) -> ColoredGraph:
    return ColoredGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: ColoredGraph) -> ColoredGraph:
    edges, colors, off = [], [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges]
        colors += list(g.colors)
        off += g.n
    return ColoredGraph.from_edges(off, edges, colors)


P3 = path(3)
K3 = complete(3)
K4 = complete(4)
C6 = cycle(6)
TWO_C3 = disjoint_union(K3, K3)


def shrikhande() -> ColoredGraph:
    """Cayley graph on Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1)."""
    nodes = list(product(range(4), range(4)))
    idx = {v: i for i, v in enumerate(nodes)}
    gens = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = {tuple(sorted((idx[(a, b)], idx[((a + x) % 4, (b + y) % 4)]))) for a, b in nodes for x, y in gens}
    return ColoredGraph.from_edges(16, edges)


def rook4() -> ColoredGraph:
    """K4 box K4: cells of a 4x4 board, adjacent when sharing a row or column."""
    nodes = list(product(range(4), range(4)))
    edges = [(i, j) for i, j in combinations(range(16), 2)
             if nodes[i][0] == nodes[j][0] or nodes[i][1] == nodes[j][1]]
    return ColoredGraph.from_edges(16, edges)


def random_graph(rng: random.Random, n: int, p: float, colors: int = 1) -> ColoredGraph:
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    cols = [rng.randrange(colors) for _ in range(n)] if colors > 1 else None
    return ColoredGraph.from_edges(n, edges, cols)


def random_perm(rng: random.Random, n: int) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def relabeled(rng: random.Random, g: ColoredGraph) -> ColoredGraph:
    return permute_graph(g, random_perm(rng, g.n))


def edge_swapped(rng: random.Random, g: ColoredGraph, swaps: int = 3) -> ColoredGraph:
    """Degree-preserving double edge swaps; returns g unchanged if no swap applies."""
    edges = set(g.edges)
    done = 0
    for _ in range(200):
        if done == swaps or len(edges) < 2:
            break
        (a, b), (c, d) = rng.sample(sorted(edges), 2)
        if rng.random() < 0.5:
            c, d = d, c
        new1, new2 = tuple(sorted((a, d))), tuple(sorted((c, b)))
        if len({a, b, c, d}) < 4 or new1 in edges or new2 in edges:
            continue
        edges -= {(a, b), tuple(sorted((c, d)))}
        edges |= {new1, new2}
        done += 1
    return ColoredGraph.from_edges(g.n, edges, g.colors)


def random_regular(rng: random.Random, n: int, d: int) -> ColoredGraph | None:
    """Configuration model with rejection; None after too many failures."""
    for _ in range(500):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = [tuple(sorted(stubs[i:i + 2])) for i in range(0, len(stubs), 2)]
        if all(a != b for a, b in pairs) and len(set(pairs)) == len(pairs):
            return ColoredGraph.from_edges(n, pairs)
    return None


def nonisomorphic_pairs(seed: int, count: int, max_n: int = 12) -> list[tuple[ColoredGraph, ColoredGraph]]:
    """Pairs with equal degree sequences (swap-derived or both regular), checked non-isomorphic."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if rng.random() < 0.3:
            n = rng.choice([8, 10])
            d = 3 if n == 8 else rng.choice([3, 4])
            a, b = random_regular(rng, n, d), random_regular(rng, n, d)
            if a is None or b is None:
                continue
        else:
            n = rng.randint(5, max_n)
            a = random_graph(rng, n, rng.choice([0.2, 0.3, 0.5]))
            b = edge_swapped(rng, a, rng.randint(1, 4))
        if not brute_force_isomorphic(a, b):
            out.append((a, b))
    return out
