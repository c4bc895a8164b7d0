"""Colored simple graphs: parsing, induced subgraphs, components, certificates."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import GraphFormatError, GuardExceeded

CERTIFICATE_MAX_NODES = 12
GRAPH6_MAX_NODES = 62


@dataclass(frozen=True)
class ColoredGraph:
    """Undirected simple graph on nodes 0..n-1 with one color id per node.

    Build instances through :meth:`from_edges`, which validates the edge list.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    colors: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError(f"negative node count {self.n}")
        if not self.colors:
            object.__setattr__(self, "colors", (0,) * self.n)
        if len(self.colors) != self.n:
            raise GraphFormatError(f"{len(self.colors)} colors given for {self.n} nodes")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) is not a normalized pair below n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], colors: Sequence[int] | None = None) -> ColoredGraph:
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) has a node id outside 0..{n - 1}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen), tuple(int(x) for x in colors) if colors is not None else ())

    @cached_property
    def adj_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_bits(m)) for m in self.adj_masks)

    def degree(self, v: int) -> int:
        return self.adj_masks[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_masks[u] >> v & 1)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_edge_list(self, with_colors: bool = True) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        if with_colors and any(self.colors):
            lines.append("colors " + " ".join(map(str, self.colors)))
        return "\n".join(lines) + "\n"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _mask_of(nodes: Iterable[int]) -> int:
    m = 0
    for v in nodes:
        m |= 1 << v
    return m


# ---------------------------------------------------------------- parsing

def _dense_labels(tokens: Sequence[str]) -> list[int]:
    try:
        values: list = [int(t) for t in tokens]
    except ValueError:
        values = list(tokens)
    rank = {v: i for i, v in enumerate(sorted(set(values)))}
    return [rank[v] for v in values]


def parse_edge_list(text: str) -> ColoredGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty edge-list input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"malformed header {lines[0]!r}, expected 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"malformed header {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise GraphFormatError(f"malformed header {lines[0]!r}")
    body = lines[1:]
    colors = None
    if body and body[-1].split()[0] == "colors":
        tokens = body[-1].split()[1:]
        if len(tokens) != n:
            raise GraphFormatError(f"colors line has {len(tokens)} entries, expected {n}")
        colors = _dense_labels(tokens)
        body = body[:-1]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)} edge lines")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"malformed edge line {ln!r}") from None
    return ColoredGraph.from_edges(n, edges, colors)


def parse_graph6(text: str | bytes) -> ColoredGraph:
    """Decode a single graph6 line (n <= 62)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError:
            raise GraphFormatError("graph6 input is not ASCII") from None
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 input")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"bad graph6 character {ch!r}")
    n = ord(s[0]) - 63
    if n > GRAPH6_MAX_NODES:
        raise GraphFormatError("extended graph6 sizes (n > 62) are not supported")
    data = s[1:]
    nbits = n * (n - 1) // 2
    if len(data) != (nbits + 5) // 6:
        raise GraphFormatError(f"graph6 body has {len(data)} bytes, expected {(nbits + 5) // 6} for n={n}")
    bits = []
    for ch in data:
        v = ord(ch) - 63
        bits.extend((v >> (5 - i)) & 1 for i in range(6))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    if any(bits[nbits:]):
        raise GraphFormatError("graph6 padding bits must be zero")
    return ColoredGraph.from_edges(n, edges)


def to_graph6(g: ColoredGraph) -> str:
    if g.n > GRAPH6_MAX_NODES:
        raise GraphFormatError("extended graph6 sizes (n > 62) are not supported")
    bits = [int(g.has_edge(i, j)) for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(g.n + 63)]
    for p in range(0, len(bits), 6):
        v = 0
        for b in bits[p:p + 6]:
            v = v << 1 | b
        out.append(chr(v + 63))
    return "".join(out)


def load_graph(data: str | bytes, format: str = "edge-list") -> ColoredGraph:
    if format == "graph6":
        return parse_graph6(data)
    if format == "edge-list":
        if isinstance(data, bytes):
            data = data.decode()
        return parse_edge_list(data)
    raise GraphFormatError(f"unknown graph format {format!r}")


# ---------------------------------------------------------- set primitives

def _check_members(g: ColoredGraph, members: Sequence[int]) -> None:
    for v in members:
        if not 0 <= v < g.n:
            raise GraphFormatError(f"node {v} out of range for n={g.n}")


def induced_subgraph(g: ColoredGraph, members: Sequence[int]) -> ColoredGraph:
    """Subgraph on ``members``, relabeled 0..m-1 in ascending member order."""
    _check_members(g, members)
    nodes = sorted(set(members))
    pos = {v: i for i, v in enumerate(nodes)}
    edges = frozenset(
        (pos[u], pos[v]) for u in nodes for v in g.neighbors[u] if v in pos and u < v
    )
    return ColoredGraph(len(nodes), edges, tuple(g.colors[v] for v in nodes))


@dataclass(frozen=True)
class ComponentPartition:
    count: int
    part_of: dict[int, int]

    def parts(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for v, p in sorted(self.part_of.items()):
            out[p].append(v)
        return [tuple(p) for p in out]


def component_masks(adj_masks: Sequence[int], mask: int) -> list[int]:
    """Connected pieces of the induced subgraph on ``mask``, ordered by lowest node."""
    comps = []
    rest = mask
    while rest:
        frontier = rest & -rest
        comp = 0
        while frontier:
            comp |= frontier
            grow = 0
            for v in _bits(frontier):
                grow |= adj_masks[v]
            frontier = grow & mask & ~comp
        comps.append(comp)
        rest &= ~comp
    return comps


def connected_components(g: ColoredGraph, members: Sequence[int]) -> ComponentPartition:
    _check_members(g, members)
    comps = component_masks(g.adj_masks, _mask_of(members))
    part_of = {v: i for i, cm in enumerate(comps) for v in _bits(cm)}
    return ComponentPartition(len(comps), part_of)


def permute_graph(g: ColoredGraph, perm: Sequence[int]) -> ColoredGraph:
    """Relabel node ``i`` as ``perm[i]``; colors travel with their nodes."""
    if sorted(perm) != list(range(g.n)):
        raise GraphFormatError("permutation is not a bijection on the node ids")
    colors = [0] * g.n
    for i, p in enumerate(perm):
        colors[p] = g.colors[i]
    edges = frozenset(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges)
    return ColoredGraph(g.n, edges, tuple(colors))


# ------------------------------------------------------------ certificates

def canonical_certificate(g: ColoredGraph) -> bytes:
    """Lexicographically minimal (colors, adjacency bits) encoding over all
    color-class-respecting orderings of the nodes.

    Adjacency bits are taken column by column over the upper triangle, so the
    bits fixed by placing the first j nodes form a prefix of the string.
    """
    if g.n > CERTIFICATE_MAX_NODES:
        raise GuardExceeded(f"certificate limited to {CERTIFICATE_MAX_NODES} nodes, got {g.n}")
    return _certificate(g.colors, g.adj_masks)


@lru_cache(maxsize=200_000)
def _certificate(colors: tuple[int, ...], adj: tuple[int, ...]) -> bytes:
    n = len(colors)
    slot_color = sorted(colors)
    # twins: same color and same neighborhood outside the pair
    twin_rep = list(range(n))
    for v in range(n):
        for u in range(v):
            if twin_rep[u] == u and colors[u] == colors[v] and \
                    adj[u] & ~(1 << v) == adj[v] & ~(1 << u):
                twin_rep[v] = u
                break

    best: list[int] | None = None
    order: list[int] = []

    def search(prefix: list[int], free: int) -> None:
        nonlocal best
        j = len(order)
        if j == n:
            if best is None or prefix < best:
                best = prefix
            return
        want = slot_color[j]
        chunks = {}
        seen_reps = set()
        for v in _bits(free):
            if colors[v] != want or twin_rep[v] in seen_reps:
                continue
            seen_reps.add(twin_rep[v])
            chunks[v] = [adj[v] >> u & 1 for u in order]
        if not chunks:
            return
        low = min(chunks.values())
        new_prefix_len = len(prefix) + j
        for v, chunk in chunks.items():
            if chunk != low:
                continue
            nxt = prefix + chunk
            if best is not None and nxt > best[:new_prefix_len]:
                continue
            order.append(v)
            search(nxt, free & ~(1 << v))
            order.pop()

    search([], (1 << n) - 1)
    assert best is not None or n == 0
    bits = best or []
    packed = int("".join(map(str, bits)) or "0", 2).to_bytes((len(bits) + 7) // 8 or 1, "big")
    return struct.pack(f">H{n}I", n, *slot_color) + packed

