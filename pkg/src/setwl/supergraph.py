"""Layered supergraph over (k,c)-sets: node sets of size <= k whose induced
subgraph has at most c connected components, linked by superset edges."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .graph import ColoredGraph, _bits, component_masks

NodeSet = tuple[int, ...]


def _members(mask: int) -> NodeSet:
    return tuple(_bits(mask))


@dataclass(frozen=True)
class SuperGraph:
    """Layers are indexed 0..k-1 (layer ``i`` holds sets of size ``i + 1``).

    ``bipartite[i]`` is an ``(E, 3)`` int array of ``(parent, child, added)``
    rows linking ``layers[i]`` to ``layers[i + 1]``.
    """

    n: int
    k: int
    c: int
    layers: list[list[NodeSet]]
    components: list[np.ndarray]
    bipartite: list[np.ndarray] = field(repr=False)

    @cached_property
    def index(self) -> list[dict[NodeSet, int]]:
        return [{s: i for i, s in enumerate(layer)} for layer in self.layers]

    @property
    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    @property
    def num_supernodes(self) -> int:
        return sum(self.layer_sizes)

    def truncate(self, k: int) -> SuperGraph:
        """Prefix of this supergraph, i.e. the (k, c) supergraph for a smaller k."""
        if not 1 <= k <= self.k or self.c > k:
            raise ParameterError(f"cannot truncate (k={self.k}, c={self.c}) to k={k}")
        return SuperGraph(self.n, k, self.c, self.layers[:k], self.components[:k], self.bipartite[:k - 1])


def extend_layer(g: ColoredGraph, sets: Sequence[NodeSet], comps: Sequence[int], c: int):
    """Grow every set by one node, keeping only results with <= c components.

    Returns ``(next_sets, next_comps, edges)`` with ``next_sets`` sorted
    lexicographically and ``edges`` an ``(E, 3)`` array of
    ``(parent index, child index, added node)``.
    """
    adj = g.adj_masks
    full = (1 << g.n) - 1
    found: dict[int, int] = {}
    raw: list[tuple[int, int, int]] = []
    for i, (s, n_comp) in enumerate(zip(sets, comps)):
        smask = 0
        hood = 0
        for v in s:
            smask |= 1 << v
            hood |= adj[v]
        hood &= ~smask
        # joining the 1-hop neighborhood never adds a component; anything
        # else adds exactly one, allowed only while below the cap
        candidates = hood if n_comp == c else full & ~smask
        for x in _bits(candidates):
            q = smask | 1 << x
            if q not in found:
                found[q] = len(found)
            raw.append((i, found[q], x))

    order = sorted(found, key=_members)
    rank = {q: r for r, q in enumerate(order)}
    remap = np.empty(len(found), dtype=np.int64)
    for q, tmp in found.items():
        remap[tmp] = rank[q]
    next_sets = [_members(q) for q in order]
    # exact counts: a node adjacent to several pieces merges them
    next_comps = [len(component_masks(adj, q)) for q in order]
    edges = np.array(raw, dtype=np.int64).reshape(-1, 3)
    if len(edges):
        edges[:, 1] = remap[edges[:, 1]]
        edges = edges[np.lexsort((edges[:, 2], edges[:, 1], edges[:, 0]))]
    return next_sets, next_comps, edges


def build_supergraph(g: ColoredGraph, k: int, c: int) -> SuperGraph:
    if k < 1 or not 1 <= c <= k:
        raise ParameterError(f"need k >= 1 and 1 <= c <= k, got k={k}, c={c}")
    sets: list[NodeSet] = [(v,) for v in range(g.n)]
    comps = [1] * g.n
    layers, components, bipartite = [sets], [np.array(comps, dtype=np.int64)], []
    for _ in range(k - 1):
        sets, comps, edges = extend_layer(g, sets, comps, c)
        layers.append(sets)
        components.append(np.array(comps, dtype=np.int64))
        bipartite.append(edges)
    return SuperGraph(g.n, k, c, layers, components, bipartite)


def build_component_map(sg: SuperGraph) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Map each multi-component set ``(layer, index)`` to its single-component parts.

    Built layer by layer from the superset edges: a child inherits the parts of
    a parent, either appending the added node as a new singleton part or
    growing the one part the added node attaches to.
    """
    cmap: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def parts_of(layer: int, idx: int) -> list[tuple[int, int]]:
        return cmap.get((layer, idx), [(layer, idx)])

    for li, edges in enumerate(sg.bipartite):
        child_layer = li + 1
        parent_comps = sg.components[li]
        child_comps = sg.components[child_layer]
        # per child, the parent with most components not exceeding the child's
        best: dict[int, tuple[int, int, int]] = {}
        for p, q, x in edges.tolist():
            if child_comps[q] == 1:
                continue
            pc = int(parent_comps[p])
            if pc > child_comps[q]:
                continue  # removing a cut node; not usable
            cur = best.get(q)
            if cur is None or pc > cur[0]:
                best[q] = (pc, p, x)
        for q, (pc, p, x) in best.items():
            base = parts_of(li, p)
            if pc == child_comps[q] - 1:
                cmap[(child_layer, q)] = base + [(0, x)]
                continue
            grown = []
            for pl, pi in base:
                members = sg.layers[pl][pi]
                joined = tuple(sorted(members + (x,)))
                j = sg.index[pl + 1].get(joined) if pl + 1 < sg.k else None
                if j is not None and sg.components[pl + 1][j] == 1:
                    grown.append((pl + 1, j))
                else:
                    grown.append((pl, pi))
            cmap[(child_layer, q)] = grown
    return cmap


# ------------------------------------------------------------------ counts

@dataclass(frozen=True)
class SupergraphStats:
    set_counts: list[int]
    edge_counts: list[int]

    @property
    def total_sets(self) -> int:
        return sum(self.set_counts)

    @property
    def total_edges(self) -> int:
        return sum(self.edge_counts)

    def as_dict(self) -> dict:
        return {
            "set_counts": self.set_counts,
            "edge_counts": self.edge_counts,
            "total_sets": self.total_sets,
            "total_edges": self.total_edges,
        }


def supergraph_stats(sg: SuperGraph) -> SupergraphStats:
    return SupergraphStats(sg.layer_sizes, [len(e) for e in sg.bipartite])


@dataclass(frozen=True)
class DenseCounts:
    n: int
    k: int
    supernodes: int
    bipartite_edges: int
    kwl_nodes: int
    kwl_edges: Fraction
    bound: Fraction | None  # C(n,k)(n-k+1)/(n-2k+1), only defined for k <= n/2

    @property
    def node_ratio(self) -> float:
        return self.kwl_nodes / self.supernodes

    @property
    def edge_ratio(self) -> float | None:
        return float(self.kwl_edges / self.bipartite_edges) if self.bipartite_edges else None

    @property
    def bound_holds(self) -> bool | None:
        return None if self.bound is None else self.supernodes <= self.bound

    def as_dict(self) -> dict:
        edges = self.kwl_edges
        return {
            "n": self.n,
            "k": self.k,
            "supernodes": self.supernodes,
            "bipartite_edges": self.bipartite_edges,
            "kwl_nodes": self.kwl_nodes,
            "kwl_edges": int(edges) if edges.denominator == 1 else float(edges),
            "node_ratio": self.node_ratio,
            "edge_ratio": self.edge_ratio,
            "node_ratio_rounded": round(self.node_ratio),
            "edge_ratio_rounded": None if self.edge_ratio is None else round(self.edge_ratio),
            "bound": None if self.bound is None else float(self.bound),
            "bound_holds": self.bound_holds,
        }


def dense_counts(n: int, k: int) -> DenseCounts:
    """Supernode/edge counts of the full k-set supergraph versus k-WL's tuple graph."""
    if n < 1 or not 1 <= k <= n:
        raise ParameterError(f"need n >= 1 and 1 <= k <= n, got n={n}, k={k}")
    supernodes = sum(comb(n, i) for i in range(1, k + 1))
    edges = sum(i * comb(n, i) for i in range(2, k + 1))
    bound = Fraction(comb(n, k) * (n - k + 1), n - 2 * k + 1) if 2 * k <= n else None
    return DenseCounts(n, k, supernodes, edges, n ** k, Fraction(k * n ** (k + 1), 2), bound)


# ------------------------------------------------------------------ export

def supergraph_to_json(sg: SuperGraph, cmap: dict | None = None, init_colors: list | None = None) -> dict:
    out = {
        "n": sg.n,
        "k": sg.k,
        "c": sg.c,
        "layers": [
            {"m": i + 1, "sets": [list(s) for s in layer], "components": sg.components[i].tolist()}
            for i, layer in enumerate(sg.layers)
        ],
        "bipartite": [{"m": i + 1, "edges": e.tolist()} for i, e in enumerate(sg.bipartite)],
    }
    if cmap is not None:
        out["componentMap"] = [
            {"layer": layer + 1, "index": idx, "parts": [[pl + 1, pi] for pl, pi in parts]}
            for (layer, idx), parts in sorted(cmap.items())
        ]
    if init_colors is not None:
        out["initColors"] = [np.asarray(col).tolist() for col in init_colors]
    return out
