"""Small-scale reference refinements: 1-WL, k-WL, k-FWL, k-MultisetWL,
k(<=)-SetWL in its direct form, and k(<=)-SetFWL.

All variants run jointly over a list of graphs against one shared
:class:`ColorTable`, so codes are comparable across graphs. The tuple-based
variants are vectorized with numpy; the multiset/set variants are plain
dictionaries keyed by sorted node tuples.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations
from math import comb
from typing import Callable, Sequence

import numpy as np

from .errors import GuardExceeded, ParameterError
from .graph import ColoredGraph, induced_subgraph, canonical_certificate
from .refine import ColorTable, Verdict

TUPLE_LIMIT = 10 ** 6
VARIANTS = ("1-wl", "k-wl", "k-fwl", "k-mwl", "k-swl", "k-sfwl")


@dataclass
class ReferenceTrace:
    variant: str
    k: int
    history: list = field(repr=False)
    iterations_to_stable: int | None = None

    def coloring(self, t: int):
        return self.history[min(t, len(self.history) - 1)]

    def histogram(self, t: int) -> Counter:
        return Counter(_values(self.coloring(t)))

    def layer_histograms(self, t: int) -> list[Counter]:
        return [self.histogram(t)]


def _values(col) -> list[int]:
    if isinstance(col, dict):
        return list(col.values())
    return np.asarray(col).reshape(-1).tolist()


def _run(graphs: Sequence[ColoredGraph], variant: str, k: int, init: Callable, step: Callable,
         table: ColorTable | None, max_iters: int | None) -> list[ReferenceTrace]:
    table = table if table is not None else ColorTable()
    current = [init(g, table) for g in graphs]
    histories = [[col] for col in current]
    count = len({v for col in current for v in _values(col)})
    if max_iters is None:
        max_iters = sum(len(_values(col)) for col in current) + 1
    stable_at = None
    for t in range(max_iters):
        nxt = [step(g, col, table) for g, col in zip(graphs, current)]
        nxt_count = len({v for col in nxt for v in _values(col)})
        if nxt_count == count:
            stable_at = t
            break
        for h, col in zip(histories, nxt):
            h.append(col)
        current, count = nxt, nxt_count
    return [ReferenceTrace(variant, k, h, stable_at) for h in histories]


# -------------------------------------------------------------------- 1-WL

def _one_wl_init(g, table):
    return [table.code(("1wl0", c)) for c in g.colors]


def _one_wl_step(g, col, table):
    return [table.code(("1wl", col[v], tuple(sorted(col[u] for u in g.neighbors[v])))) for v in range(g.n)]


def one_wl(graphs: Sequence[ColoredGraph], table=None, max_iters=None) -> list[ReferenceTrace]:
    """Classical color refinement over node neighborhoods."""
    return _run(graphs, "1-wl", 1, _one_wl_init, _one_wl_step, table, max_iters)


# ------------------------------------------------------------ tuple-based

def _tuple_guard(g: ColoredGraph, k: int) -> None:
    if g.n ** k > TUPLE_LIMIT:
        raise GuardExceeded(f"n^k = {g.n ** k} exceeds {TUPLE_LIMIT}")


def _adjacency(g: ColoredGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for u, v in g.edges:
        a[u, v] = a[v, u] = 1
    return a


def _atomic_types(g: ColoredGraph, k: int, table: ColorTable) -> np.ndarray:
    """Codes of (equality pattern, adjacency pattern, node colors) for all k-tuples."""
    n = g.n
    idx = np.indices((n,) * k).reshape(k, -1).T
    a = _adjacency(g)
    colors = np.asarray(g.colors, dtype=np.int64)
    pairs = list(combinations(range(k), 2))
    eq = [(idx[:, i] == idx[:, j]).astype(np.int64) for i, j in pairs]
    ad = [a[idx[:, i], idx[:, j]] for i, j in pairs]
    cols = [colors[idx[:, i]] for i in range(k)]
    rows = np.stack(eq + ad + cols, axis=1) if k > 1 else np.stack(cols, axis=1)
    return table.encode_rows(f"at{k}", [rows]).reshape((n,) * k)


def _substituted(col: np.ndarray, i: int) -> np.ndarray:
    """Array ``P[v..., x] = col[v with position i replaced by x]``."""
    k = col.ndim
    n = col.shape[0]
    moved = np.expand_dims(np.moveaxis(col, i, -1), i)
    return np.broadcast_to(moved, (n,) * k + (n,))


def _kwl_step(g, col, table):
    n, k = g.n, col.ndim
    blocks = [col.reshape(-1, 1)]
    for i in range(k):
        blocks.append(np.sort(_substituted(col, i), axis=-1).reshape(-1, n))
    return table.encode_rows(f"kwl{k}", blocks).reshape(col.shape)


def _kfwl_step(g, col, table):
    n, k = g.n, col.ndim
    sub = np.stack([_substituted(col, i) for i in range(k)], axis=-1)
    inner = table.encode_rows(f"kfwl-inner{k}", [sub.reshape(-1, k)]).reshape(-1, n)
    return table.encode_rows(f"kfwl{k}", [col.reshape(-1, 1), np.sort(inner, axis=1)]).reshape(col.shape)


def k_wl(graphs: Sequence[ColoredGraph], k: int, table=None, max_iters=None) -> list[ReferenceTrace]:
    """k-WL over all ordered k-tuples; k=1 is taken to mean classical 1-WL."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k == 1:
        return one_wl(graphs, table, max_iters)
    for g in graphs:
        _tuple_guard(g, k)
    return _run(graphs, "k-wl", k, lambda g, t: _atomic_types(g, k, t), _kwl_step, table, max_iters)


def k_fwl(graphs: Sequence[ColoredGraph], k: int, table=None, max_iters=None) -> list[ReferenceTrace]:
    """Folklore k-WL; k=1 is taken to mean classical 1-WL."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    if k == 1:
        return one_wl(graphs, table, max_iters)
    for g in graphs:
        _tuple_guard(g, k)
    return _run(graphs, "k-fwl", k, lambda g, t: _atomic_types(g, k, t), _kfwl_step, table, max_iters)


# ------------------------------------------------------- multiset / set

def _multiset_guard(g: ColoredGraph, k: int) -> None:
    if comb(g.n + k - 1, k) > TUPLE_LIMIT:
        raise GuardExceeded(f"C(n+k-1, k) = {comb(g.n + k - 1, k)} exceeds {TUPLE_LIMIT}")


def atomic_type(g: ColoredGraph, tup: Sequence[int]) -> tuple:
    pairs = list(combinations(range(len(tup)), 2))
    return (
        tuple(int(tup[i] == tup[j]) for i, j in pairs),
        tuple(int(g.has_edge(tup[i], tup[j])) for i, j in pairs),
        tuple(g.colors[v] for v in tup),
    )


def _mwl_init_code(g: ColoredGraph, ms: tuple[int, ...], table: ColorTable) -> int:
    k = len(ms)
    ats = sorted(table.code(("at", k, atomic_type(g, p))) for p in set(permutations(ms)))
    return table.code(("mwl0", tuple(ats)))


def _mwl_init(k):
    def init(g, table):
        return {ms: _mwl_init_code(g, ms, table) for ms in combinations_with_replacement(range(g.n), k)}
    return init


def _mwl_step(g, col, table):
    out = {}
    for ms in col:
        groups = []
        for i in range(len(ms)):
            rest = ms[:i] + ms[i + 1:]
            groups.append(tuple(sorted(col[tuple(sorted(rest + (x,)))] for x in range(g.n))))
        out[ms] = table.code(("mwl", col[ms], tuple(sorted(groups))))
    return out


def k_multiset_wl(graphs: Sequence[ColoredGraph], k: int, table=None, max_iters=None) -> list[ReferenceTrace]:
    """Refinement over unordered k-multisets of nodes (repetitions allowed)."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    for g in graphs:
        _multiset_guard(g, k)
    return _run(graphs, "k-mwl", k, _mwl_init(k), _mwl_step, table, max_iters)


def compositions(m: int, k: int):
    """Repetition vectors (n_1..n_m), each >= 1, summing to k."""
    for cuts in combinations(range(1, k), m - 1):
        bounds = (0,) + cuts + (k,)
        yield tuple(b - a for a, b in zip(bounds[:-1], bounds[1:]))


def expand_set(s: tuple[int, ...], reps: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(v for v, r in zip(s, reps) for _ in range(r))


def all_sets(n: int, k: int):
    for m in range(1, min(k, n) + 1):
        yield from combinations(range(n), m)


def _swl_init(k):
    def init(g, table):
        # multiset over all k-multisets supported on exactly this set
        mw = {}
        out = {}
        for s in all_sets(g.n, k):
            codes = []
            for reps in compositions(len(s), k):
                ms = expand_set(s, reps)
                if ms not in mw:
                    mw[ms] = _mwl_init_code(g, ms, table)
                codes.append(mw[ms])
            out[s] = table.code(("swl0", tuple(sorted(codes))))
        return out
    return init


def _replace(s: tuple[int, ...], i: int, x: int) -> tuple[int, ...]:
    return tuple(sorted(set(s[:i] + s[i + 1:]) | {x}))


def _swl_step(k):
    def step(g, col, table):
        out = {}
        for s in col:
            outside = [x for x in range(g.n) if x not in s]
            right = tuple(sorted(col[tuple(sorted(s + (x,)))] for x in outside)) if len(s) < k else ()
            left = tuple(sorted(col[s[:i] + s[i + 1:]] for i in range(len(s)))) if len(s) > 1 else ()
            repl = tuple(sorted(tuple(sorted(col[_replace(s, i, x)] for x in outside)) for i in range(len(s))))
            out[s] = table.code(("swl", col[s], right, left, repl))
        return out
    return step


def k_set_wl(graphs: Sequence[ColoredGraph], k: int, table=None, max_iters=None) -> list[ReferenceTrace]:
    """k(<=)-SetWL in its direct form over all sets of size <= k: own color,
    supersets, subsets, and the per-position replacement multisets."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    for g in graphs:
        _multiset_guard(g, k)
    return _run(graphs, "k-swl", k, _swl_init(k), _swl_step(k), table, max_iters)


def _sfwl_init(k):
    def init(g, table):
        return {s: table.code(("cert", canonical_certificate(induced_subgraph(g, s)))) for s in all_sets(g.n, k)}
    return init


def _sfwl_step(g, col, table):
    out = {}
    for s in col:
        inner = sorted(tuple(sorted(col[_replace(s, i, x)] for i in range(len(s)))) for x in range(g.n))
        out[s] = table.code(("sfwl", col[s], tuple(inner)))
    return out


def k_set_fwl(graphs: Sequence[ColoredGraph], k: int, table=None, max_iters=None) -> list[ReferenceTrace]:
    """Set analogue of k-FWL: for every node x, the multiset of colors of the
    sets obtained by substituting x at each position."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    for g in graphs:
        _multiset_guard(g, k)
    return _run(graphs, "k-sfwl", k, _sfwl_init(k), _sfwl_step, table, max_iters)


# ----------------------------------------------------------------- verdict

_RUNNERS = {
    "1-wl": lambda gs, k: one_wl(gs),
    "k-wl": k_wl,
    "k-fwl": k_fwl,
    "k-mwl": k_multiset_wl,
    "k-swl": k_set_wl,
    "k-sfwl": k_set_fwl,
}


def distinguish_reference(g1: ColoredGraph, g2: ColoredGraph, variant: str, k: int) -> Verdict:
    if variant not in _RUNNERS:
        raise ParameterError(f"variant must be one of {VARIANTS}, got {variant!r}")
    ta, tb = _RUNNERS[variant]([g1, g2], k)
    first = None
    for t in range(max(len(ta.history), len(tb.history))):
        if ta.histogram(t) != tb.histogram(t):
            first = t
            break
    return Verdict(first is not None, first, k, k, "parallel", ta.iterations_to_stable, [ta, tb], variant=variant)
