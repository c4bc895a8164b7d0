"""CFI-style graph pairs over the complete base graph K_k.

Each base edge ``e`` becomes two vertices ``e^0, e^1`` (joined to each
other); each base node ``v`` becomes ``2^(k-1)`` vertices ``v^X``, one per
subset ``X`` of its incident edges, with ``v^X ~ e^1`` when ``e in X`` and
``v^X ~ e^0`` otherwise. Keeping only the even-``|X|`` node vertices, except
odd ones at the nodes of ``T``, gives ``X_T``; ``X_T`` and ``X_U`` are
isomorphic exactly when ``|T|`` and ``|U|`` have equal parity.

Vertex ids: edge vertices first in lexicographic edge order (``e^0`` then
``e^1``), then node vertices in node order with ``X`` in binary-counter order
over the node's incident edges. Colors: node classes ``0..k-1``, edge classes
``k..k+C(k,2)-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import GuardExceeded
from .graph import ColoredGraph, induced_subgraph

MAX_VERTICES = 10 ** 5


@dataclass(frozen=True)
class EdgeVertex:
    edge: tuple[int, int]
    bit: int


@dataclass(frozen=True)
class NodeVertex:
    node: int
    subset: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class CfiGraph:
    graph: ColoredGraph
    labels: tuple[EdgeVertex | NodeVertex, ...]

    def sidecar(self) -> list[dict]:
        out = []
        for vid, lab in enumerate(self.labels):
            if isinstance(lab, EdgeVertex):
                out.append({"id": vid, "kind": "edge", "edge": list(lab.edge), "bit": lab.bit})
            else:
                out.append({"id": vid, "kind": "node", "node": lab.node,
                            "subset": [list(e) for e in sorted(lab.subset)]})
        return out


def _check(k: int) -> None:
    if k < 3:
        raise GuardExceeded(f"CFI construction needs k >= 3, got {k}")
    if k * (k - 1) + k * 2 ** (k - 1) > MAX_VERTICES:
        raise GuardExceeded(f"CFI({k}) exceeds {MAX_VERTICES} vertices")


def _layout(k: int):
    base_edges = list(combinations(range(k), 2))
    incident = [[e for e in base_edges if v in e] for v in range(k)]
    labels: list[EdgeVertex | NodeVertex] = []
    for e in base_edges:
        labels += [EdgeVertex(e, 0), EdgeVertex(e, 1)]
    for v in range(k):
        for mask in range(2 ** (k - 1)):
            labels.append(NodeVertex(v, frozenset(e for i, e in enumerate(incident[v]) if mask >> i & 1)))
    return base_edges, incident, labels


def cfi_expand(k: int) -> CfiGraph:
    """The full enlarged graph X(K_k)."""
    _check(k)
    base_edges, incident, labels = _layout(k)
    eid = {e: i for i, e in enumerate(base_edges)}
    edges = [(2 * i, 2 * i + 1) for i in range(len(base_edges))]
    colors = []
    for vid, lab in enumerate(labels):
        if isinstance(lab, EdgeVertex):
            colors.append(k + eid[lab.edge])
        else:
            colors.append(lab.node)
            for e in incident[lab.node]:
                edges.append((vid, 2 * eid[e] + (1 if e in lab.subset else 0)))
    return CfiGraph(ColoredGraph.from_edges(len(labels), edges, colors), tuple(labels))


def _keep(lab, T: set[int]) -> bool:
    if isinstance(lab, EdgeVertex):
        return True
    return len(lab.subset) % 2 == (1 if lab.node in T else 0)


def cfi_subgraph(k: int, T: Iterable[int] = ()) -> CfiGraph:
    """X_T(K_k): all edge vertices plus node vertices of the parity selected by T."""
    full = cfi_expand(k)
    T = set(T)
    if not T <= set(range(k)):
        raise ValueError(f"T must be a subset of base nodes 0..{k - 1}")
    keep = [vid for vid, lab in enumerate(full.labels) if _keep(lab, T)]
    return CfiGraph(induced_subgraph(full.graph, keep), tuple(full.labels[v] for v in keep))


def cfi_pair(k: int) -> tuple[CfiGraph, CfiGraph]:
    """(X_empty, X_{v1}) with v1 = base node 0: non-isomorphic, (k-1)-WL-equivalent."""
    return cfi_subgraph(k, ()), cfi_subgraph(k, (0,))


def cfi_flip_map(k: int, F: Iterable[tuple[int, int]]) -> list[int]:
    """Permutation of X(K_k) vertex ids swapping e^0/e^1 for e in F and
    sending v^X to v^(X xor (F restricted to v's edges))."""
    _check(k)
    _, _, labels = _layout(k)
    F = {tuple(sorted(e)) for e in F}
    where = {lab: vid for vid, lab in enumerate(labels)}
    perm = []
    for lab in labels:
        if isinstance(lab, EdgeVertex):
            image = EdgeVertex(lab.edge, 1 - lab.bit) if lab.edge in F else lab
        else:
            image = NodeVertex(lab.node, lab.subset ^ {e for e in F if lab.node in e})
        perm.append(where[image])
    return perm


def base_edges_within(nodes: Iterable[int]) -> list[tuple[int, int]]:
    """E(K[S]): every pair of base nodes inside S."""
    return list(combinations(sorted(set(nodes)), 2))
