"""(k,c)-SetWL color refinement over the layered supergraph.

Colors are dense integer codes handed out by a :class:`ColorTable`; graphs
refined against the same table get comparable codes. Every refinement key
contains the previous color of the set (directly or through its half-step
code), so each iteration can only split classes, and an unchanged number of
classes per layer means the partition is stable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .errors import GuardExceeded, ParameterError
from .graph import CERTIFICATE_MAX_NODES, ColoredGraph, _certificate
from .supergraph import SuperGraph, build_component_map, build_supergraph

SCHEDULES = ("parallel", "sequential")


class ColorTable:
    """Injective map from structural keys to dense codes, in first-seen order."""

    def __init__(self):
        self._codes: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return len(self._codes)

    def code(self, key: Hashable) -> int:
        return self._codes.setdefault(key, len(self._codes))

    def encode_rows(self, tag: str, blocks: Sequence[np.ndarray]) -> np.ndarray:
        """Code every row of the horizontally stacked ``blocks``.

        Each block is an ``(N, w)`` array; entries equal to -1 are padding and
        are dropped from the key, so the same multiset gets the same code
        whatever width it was padded to.
        """
        rows = np.hstack(blocks)
        if len(rows) == 0:
            return np.empty(0, dtype=np.int64)
        uniq, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        bounds = np.cumsum([0] + [b.shape[1] for b in blocks])
        mapped = np.empty(len(uniq), dtype=np.int64)
        for u in np.argsort(first, kind="stable"):
            row = uniq[u]
            key = (tag,) + tuple(
                tuple(x for x in row[lo:hi].tolist() if x >= 0) for lo, hi in zip(bounds[:-1], bounds[1:])
            )
            mapped[u] = self.code(key)
        return mapped[inverse.reshape(-1)]


def multiset_rows(owner: np.ndarray, values: np.ndarray, size: int) -> np.ndarray:
    """Row ``i`` holds the ascending multiset ``values[owner == i]``, right-padded with -1."""
    if size == 0 or len(owner) == 0:
        return np.full((size, 1), -1, dtype=np.int64)
    order = np.lexsort((values, owner))
    o, v = owner[order], values[order]
    counts = np.bincount(o, minlength=size)
    starts = np.cumsum(counts) - counts
    rows = np.full((size, max(int(counts.max()), 1)), -1, dtype=np.int64)
    rows[o, np.arange(len(o)) - starts[o]] = v
    return rows


def _pad_concat(parts: Sequence[np.ndarray]) -> np.ndarray:
    width = max(p.shape[1] for p in parts)
    return np.vstack([np.pad(p, ((0, 0), (0, width - p.shape[1])), constant_values=-1) for p in parts])


def _col(a: np.ndarray) -> np.ndarray:
    return a.reshape(-1, 1)


def _joint_encode(table: ColorTable, tag: str, per_graph_blocks: list[list[np.ndarray]]) -> list[np.ndarray]:
    """Encode one layer of several graphs in one pass, graph order preserved."""
    sizes = [len(blocks[0]) for blocks in per_graph_blocks]
    stacked = [_pad_concat([blocks[b] for blocks in per_graph_blocks]) for b in range(len(per_graph_blocks[0]))]
    codes = table.encode_rows(tag, stacked)
    return np.split(codes, np.cumsum(sizes)[:-1])


# ----------------------------------------------------------- initialization

def _set_certificate(g: ColoredGraph, members: tuple[int, ...]) -> bytes:
    if len(members) > CERTIFICATE_MAX_NODES:
        raise GuardExceeded(f"certificate limited to {CERTIFICATE_MAX_NODES} nodes, got {len(members)}")
    pos = {v: i for i, v in enumerate(members)}
    adj = []
    for v in members:
        m = 0
        for u in g.neighbors[v]:
            j = pos.get(u)
            if j is not None:
                m |= 1 << j
        adj.append(m)
    return _certificate(tuple(g.colors[v] for v in members), tuple(adj))


def _init_layer(g: ColoredGraph, sg: SuperGraph, cmap: dict, layer: int,
                codes: list[np.ndarray], table: ColorTable) -> np.ndarray:
    out = np.empty(len(sg.layers[layer]), dtype=np.int64)
    comps = sg.components[layer]
    for i, members in enumerate(sg.layers[layer]):
        if comps[i] == 1:
            out[i] = table.code(("cert", _set_certificate(g, members)))
        else:
            parts = sorted(int(codes[pl][pi]) for pl, pi in cmap[(layer, i)])
            out[i] = table.code(("parts", tuple(parts)))
    return out


def init_colors(g: ColoredGraph, sg: SuperGraph, cmap: dict, table: ColorTable) -> list[np.ndarray]:
    """Initial codes per layer: isomorphism type of each induced subgraph.

    Connected sets are certified directly; a disconnected set is coded by the
    multiset of its parts' codes, which identifies its isomorphism type
    because isomorphism of graphs reduces to matching their components.
    """
    return _init_joint([g], [sg], [cmap], table)[0]


def _init_joint(graphs, sgs, cmaps, table) -> list[list[np.ndarray]]:
    out: list[list[np.ndarray]] = [[] for _ in graphs]
    for layer in range(sgs[0].k):
        for gi, (g, sg, cmap) in enumerate(zip(graphs, sgs, cmaps)):
            out[gi].append(_init_layer(g, sg, cmap, layer, out[gi], table))
    return out


# --------------------------------------------------------------- schedules

def _edges(sg: SuperGraph, gap: int) -> tuple[np.ndarray, np.ndarray]:
    e = sg.bipartite[gap]
    return e[:, 0], e[:, 1]


def _right_multiset(sg: SuperGraph, layer: int, upper: np.ndarray) -> np.ndarray:
    lo, hi = _edges(sg, layer)
    return multiset_rows(lo, upper[hi], len(sg.layers[layer]))


def _left_multiset(sg: SuperGraph, layer: int, lower: np.ndarray) -> np.ndarray:
    lo, hi = _edges(sg, layer - 1)
    return multiset_rows(hi, lower[lo], len(sg.layers[layer]))


def _empty(sg: SuperGraph, layer: int) -> np.ndarray:
    return np.full((len(sg.layers[layer]), 1), -1, dtype=np.int64)


def refine_parallel(sgs: Sequence[SuperGraph], colorings: Sequence[list[np.ndarray]],
                    table: ColorTable) -> list[list[np.ndarray]]:
    """One synchronous round on every set of every graph.

    half(s) = multiset of current codes of the supersets of s;
    new(s)  = (code(s), half(s), multiset of subset codes, multiset of subset halves).
    """
    k = sgs[0].k
    half = [[None] * k for _ in sgs]
    for layer in range(k):
        blocks = [[_right_multiset(sg, layer, col[layer + 1]) if layer < k - 1 else _empty(sg, layer)]
                  for sg, col in zip(sgs, colorings)]
        for gi, h in enumerate(_joint_encode(table, "half", blocks)):
            half[gi][layer] = h

    new: list[list[np.ndarray]] = [[] for _ in sgs]
    for layer in range(k):
        blocks = []
        for gi, (sg, col) in enumerate(zip(sgs, colorings)):
            if layer == 0:
                left, left_half = _empty(sg, 0), _empty(sg, 0)
            else:
                left = _left_multiset(sg, layer, col[layer - 1])
                left_half = _left_multiset(sg, layer, half[gi][layer - 1])
            blocks.append([_col(col[layer]), _col(half[gi][layer]), left, left_half])
        for gi, codes in enumerate(_joint_encode(table, "par", blocks)):
            new[gi].append(codes)
    return new


def refine_sequential(sgs: Sequence[SuperGraph], colorings: Sequence[list[np.ndarray]],
                      table: ColorTable) -> list[list[np.ndarray]]:
    """One bidirectional block-sequential round.

    Backward sweep from the top layer: half(s) = (code(s), multiset of the
    supersets' fresh halves), the top layer using its current codes as halves.
    Forward sweep from layer 2: new(s) = (half(s), multiset of the subsets'
    fresh new codes); singletons take their half code.
    """
    k = sgs[0].k
    half = [[None] * k for _ in sgs]
    for gi, col in enumerate(colorings):
        half[gi][k - 1] = col[k - 1]
    for layer in range(k - 2, -1, -1):
        blocks = [[_col(col[layer]), _right_multiset(sg, layer, half[gi][layer + 1])]
                  for gi, (sg, col) in enumerate(zip(sgs, colorings))]
        for gi, h in enumerate(_joint_encode(table, "seq-half", blocks)):
            half[gi][layer] = h

    new: list[list[np.ndarray]] = [[half[gi][0]] for gi in range(len(sgs))]
    for layer in range(1, k):
        blocks = [[_col(half[gi][layer]), _left_multiset(sg, layer, new[gi][layer - 1])]
                  for gi, sg in enumerate(sgs)]
        for gi, codes in enumerate(_joint_encode(table, "seq-new", blocks)):
            new[gi].append(codes)
    return new


_STEP = {"parallel": refine_parallel, "sequential": refine_sequential}


# ------------------------------------------------------------------ traces

@dataclass
class RefinementTrace:
    """Colorings of one graph per iteration (index 0 = initialization)."""

    k: int
    c: int
    schedule: str
    supergraph: SuperGraph
    history: list[list[np.ndarray]] = field(repr=False)
    iterations_to_stable: int | None = None

    @property
    def final(self) -> list[np.ndarray]:
        return self.history[-1]

    def coloring(self, t: int) -> list[np.ndarray]:
        """Coloring at iteration t; past the last recorded one the partition no longer changes."""
        return self.history[min(t, len(self.history) - 1)]

    def layer_histograms(self, t: int) -> list[Counter]:
        return [Counter(codes.tolist()) for codes in self.coloring(t)]

    def histogram(self, t: int) -> Counter:
        hist: Counter = Counter()
        for layer, codes in enumerate(self.coloring(t)):
            comps = self.supergraph.components[layer]
            hist.update(zip([layer + 1] * len(codes), comps.tolist(), codes.tolist()))
        return hist

    def fingerprint(self) -> tuple:
        return graph_fingerprint(self)


def graph_fingerprint(trace: RefinementTrace) -> tuple:
    """Sorted ((set size, components, code), multiplicity) pairs of the final coloring."""
    return tuple(sorted(trace.histogram(len(trace.history) - 1).items()))


def _class_counts(colorings: Sequence[list[np.ndarray]], k: int) -> list[int]:
    return [len(np.unique(np.concatenate([col[layer] for col in colorings]))) for layer in range(k)]


def check_params(k: int, c: int, schedule: str = "sequential") -> None:
    if k < 1 or not 1 <= c <= k:
        raise ParameterError(f"need k >= 1 and 1 <= c <= k, got k={k}, c={c}")
    if schedule not in SCHEDULES:
        raise ParameterError(f"schedule must be one of {SCHEDULES}, got {schedule!r}")


def refine_jointly(graphs: Sequence[ColoredGraph], k: int, c: int, schedule: str = "sequential",
                   max_iters: int | None = None, table: ColorTable | None = None,
                   supergraphs: Sequence[SuperGraph] | None = None) -> list[RefinementTrace]:
    """Refine several graphs against one shared table until the joint partition is stable."""
    check_params(k, c, schedule)
    if not graphs:
        return []
    table = table if table is not None else ColorTable()
    sgs = list(supergraphs) if supergraphs is not None else [build_supergraph(g, k, c) for g in graphs]
    cmaps = [build_component_map(sg) for sg in sgs]
    current = _init_joint(graphs, sgs, cmaps, table)
    histories = [[col] for col in current]
    if max_iters is None:
        max_iters = sum(sg.num_supernodes for sg in sgs) + 1
    step = _STEP[schedule]
    counts = _class_counts(current, k)
    stable_at = None
    for t in range(max_iters):
        nxt = step(sgs, current, table)
        nxt_counts = _class_counts(nxt, k)
        if nxt_counts == counts:
            stable_at = t
            break
        for h, col in zip(histories, nxt):
            h.append(col)
        current, counts = nxt, nxt_counts
    return [RefinementTrace(k, c, schedule, sg, h, stable_at) for sg, h in zip(sgs, histories)]


def run_to_stable(g: ColoredGraph, k: int, c: int, schedule: str = "sequential",
                  max_iters: int | None = None) -> RefinementTrace:
    return refine_jointly([g], k, c, schedule, max_iters)[0]


# ---------------------------------------------------------------- verdicts

@dataclass
class Verdict:
    distinguished: bool
    iteration: int | None
    k: int
    c: int
    schedule: str
    iterations_to_stable: int | None
    traces: list = field(default_factory=list, repr=False)
    variant: str | None = None

    def as_dict(self) -> dict:
        out = {
            "verdict": "distinguished" if self.distinguished else "indistinguishable",
            "iteration": self.iteration,
            "k": self.k,
            "c": self.c,
            "schedule": self.schedule,
        }
        if self.variant is not None:
            out["variant"] = self.variant
        out["layers"] = [
            entry for label, trace in zip("ab", self.traces) for entry in _layer_report(trace, label)
        ]
        out["iterations_to_stable"] = self.iterations_to_stable
        return out


def _layer_report(trace, label: str) -> list[dict]:
    out = []
    for m, hist in enumerate(trace.layer_histograms(len(trace.history) - 1), start=1):
        out.append({"m": m, "graph": label, "classes": len(hist), "histogram": sorted(hist.items())})
    return out


def first_difference(trace_a, trace_b) -> int | None:
    last = max(len(trace_a.history), len(trace_b.history))
    for t in range(last):
        if trace_a.histogram(t) != trace_b.histogram(t):
            return t
    return None


def distinguish(g1: ColoredGraph, g2: ColoredGraph, k: int, c: int,
                schedule: str = "sequential", max_iters: int | None = None) -> Verdict:
    """Jointly refine both graphs; report the first iteration whose histograms differ."""
    ta, tb = refine_jointly([g1, g2], k, c, schedule, max_iters)
    t = first_difference(ta, tb)
    return Verdict(t is not None, t, k, c, schedule, ta.iterations_to_stable, [ta, tb])


def trace_to_json(trace: RefinementTrace) -> dict:
    return {
        "k": trace.k,
        "c": trace.c,
        "schedule": trace.schedule,
        "iterations_to_stable": trace.iterations_to_stable,
        "iterations": [
            [{"m": m, "classes": len(h), "histogram": sorted(h.items())}
             for m, h in enumerate(trace.layer_histograms(t), start=1)]
            for t in range(len(trace.history))
        ],
        "layers": _layer_report(trace, "a"),
        "fingerprint": [[list(key), count] for key, count in trace.fingerprint()],
    }
