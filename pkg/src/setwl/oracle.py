"""Brute-force ground truth: exact isomorphism, (k,c)-set enumeration,
small-pattern subgraph counts. Deliberately independent of the supergraph
builder and of the certificate search."""

from __future__ import annotations

from collections import Counter
from itertools import combinations, permutations

from .errors import GuardExceeded
from .graph import ColoredGraph, connected_components

ISO_MAX_NODES = 16

PATTERNS: dict[str, tuple[int, list[tuple[int, int]]]] = {
    "triangle": (3, [(0, 1), (1, 2), (0, 2)]),
    "tailed_triangle": (4, [(0, 1), (1, 2), (0, 2), (0, 3)]),
    "star3": (4, [(0, 1), (0, 2), (0, 3)]),
    "cycle4": (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
}


def brute_force_isomorphic(g: ColoredGraph, h: ColoredGraph) -> bool:
    if max(g.n, h.n) > ISO_MAX_NODES:
        raise GuardExceeded(f"brute-force isomorphism limited to {ISO_MAX_NODES} nodes")
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    sig_g = [(g.colors[v], g.degree(v)) for v in range(g.n)]
    sig_h = [(h.colors[v], h.degree(v)) for v in range(h.n)]
    if Counter(sig_g) != Counter(sig_h):
        return False

    # place rare signatures first, then prefer nodes adjacent to placed ones
    freq = Counter(sig_g)
    order: list[int] = []
    left = set(range(g.n))
    while left:
        placed = set(order)
        v = min(left, key=lambda u: (-len(placed & set(g.neighbors[u])), freq[sig_g[u]], sig_g[u], u))
        order.append(v)
        left.remove(v)

    by_sig: dict = {}
    for u in range(h.n):
        by_sig.setdefault(sig_h[u], []).append(u)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for u in by_sig[sig_g[v]]:
            if u in used:
                continue
            if all(g.has_edge(v, w) == h.has_edge(u, mapping[w]) for w in order[:i]):
                mapping[v] = u
                used.add(u)
                if extend(i + 1):
                    return True
                used.discard(u)
                del mapping[v]
        return False

    return extend(0)


def enumerate_kc_sets(g: ColoredGraph, k: int, c: int) -> list[tuple[int, ...]]:
    """All node sets of size 1..k with at most c components, by direct subset enumeration."""
    if g.n > 20 or k > 5:
        raise GuardExceeded("subset enumeration limited to n <= 20, k <= 5")
    out = []
    for size in range(1, k + 1):
        for s in combinations(range(g.n), size):
            if connected_components(g, s).count <= c:
                out.append(s)
    return out


def _pattern_automorphisms(p: int, edges: list[tuple[int, int]]) -> int:
    es = {frozenset(e) for e in edges}
    return sum(1 for perm in permutations(range(p)) if {frozenset((perm[a], perm[b])) for a, b in edges} == es)


def count_pattern(g: ColoredGraph, pattern: str) -> int:
    """Number of (not necessarily induced) subgraphs of g isomorphic to the pattern."""
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; choose from {sorted(PATTERNS)}")
    if g.n > 64:
        raise GuardExceeded("pattern counting limited to n <= 64")
    p, pedges = PATTERNS[pattern]
    # pattern nodes are already numbered so each one after the first touches an earlier one
    back = [[a for a, b in pedges if b == i] + [b for a, b in pedges if a == i and b < i] for i in range(p)]
    adj = g.adj_masks
    full = (1 << g.n) - 1

    def embed(i: int, image: list[int], used: int) -> int:
        cand = full & ~used
        for j in back[i]:
            cand &= adj[image[j]]
        if i == p - 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            image.append(v)
            total += embed(i + 1, image, used | low)
            image.pop()
            cand ^= low
        return total

    return embed(0, [], 0) // _pattern_automorphisms(p, pedges)
