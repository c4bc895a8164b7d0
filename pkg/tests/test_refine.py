import random

import numpy as np
import pytest

from helpers import C6, K3, P3, TWO_C3, random_graph, relabeled
from setwl.cfi import cfi_pair
from setwl.errors import ParameterError
from setwl.refine import (ColorTable, distinguish, graph_fingerprint, init_colors, multiset_rows,
                          refine_jointly, refine_parallel, refine_sequential, run_to_stable, trace_to_json)
from setwl.supergraph import build_component_map, build_supergraph


def _init(g, k, c, table=None):
    sg = build_supergraph(g, k, c)
    return sg, init_colors(g, sg, build_component_map(sg), table or ColorTable())


def _labels(coloring):
    return [(layer, i, int(code)) for layer, codes in enumerate(coloring) for i, code in enumerate(codes)]


def _same_partition(a, b) -> bool:
    fa, fb = {}, {}
    for (l1, i1, x), (l2, i2, y) in zip(_labels(a), _labels(b)):
        if fa.setdefault(x, y) != y or fb.setdefault(y, x) != x:
            return False
    return True


def _refines(fine, coarse) -> bool:
    seen = {}
    return all(seen.setdefault(x, y) == y for (_, _, x), (_, _, y) in zip(_labels(fine), _labels(coarse)))


# ------------------------------------------------------------ color table

def test_color_table_is_injective_in_first_seen_order():
    t = ColorTable()
    assert [t.code("a"), t.code("b"), t.code("a")] == [0, 1, 0]
    rows = t.encode_rows("x", [np.array([[1, 2], [1, 2], [3, -1]])])
    assert rows.tolist() == [2, 2, 3]
    # padding is not part of the key
    assert t.encode_rows("x", [np.array([[3, -1, -1]])]).tolist() == [3]


def test_multiset_rows_sorts_and_pads():
    owner = np.array([1, 0, 1, 1])
    values = np.array([5, 7, 2, 9])
    assert multiset_rows(owner, values, 3).tolist() == [[7, -1, -1], [2, 5, 9], [-1, -1, -1]]


# ---------------------------------------------------------- initialization

def test_init_examples():
    sg, col = _init(P3, 2, 2)
    idx = sg.index[1]
    assert col[1][idx[(0, 1)]] == col[1][idx[(1, 2)]] != col[1][idx[(0, 2)]]
    assert len(set(col[0].tolist())) == 1
    sg, col = _init(TWO_C3, 4, 2)
    codes = {int(col[3][i]) for i, s in enumerate(sg.layers[3])
             if set(s) in ({0, 1, 2, x} for x in (3, 4, 5)) or set(s) in ({3, 4, 5, x} for x in (0, 1, 2))}
    assert len(codes) == 1


def test_init_respects_node_colors():
    from setwl.graph import ColoredGraph
    g = ColoredGraph.from_edges(3, [(0, 1), (1, 2)], [0, 1, 0])
    sg, col = _init(g, 1, 1)
    assert col[0].tolist()[0] == col[0].tolist()[2] != col[0].tolist()[1]


# --------------------------------------------------------------- one step

def test_parallel_step_on_p3_separates_middle():
    sg, col = _init(P3, 2, 1)
    (nxt,) = refine_parallel([sg], [col], ColorTable())
    s = nxt[0].tolist()
    assert s[0] == s[2] != s[1]


@pytest.mark.parametrize("step", [refine_parallel, refine_sequential])
def test_step_keeps_a_stable_partition(step):
    table = ColorTable()
    trace = run_to_stable(C6, 3, 2)
    final = trace.final
    (nxt,) = step([trace.supergraph], [final], table)
    assert _same_partition(final, nxt)


def test_k1_has_no_neighbours_and_is_stable_at_once():
    for g in (P3, C6, K3):
        trace = run_to_stable(g, 1, 1)
        assert trace.iterations_to_stable == 0 and len(trace.history) == 1


# ----------------------------------------------------------- stable runs

def test_k3_stable_immediately():
    trace = run_to_stable(K3, 2, 1)
    assert trace.iterations_to_stable == 0
    assert sum(len(h) for h in trace.layer_histograms(0)) == 2


def test_c6_pairs_classes():
    trace = run_to_stable(C6, 2, 1)
    assert [len(h) for h in trace.layer_histograms(len(trace.history) - 1)] == [1, 1]


@pytest.mark.parametrize("schedule", ["parallel", "sequential"])
def test_refinement_never_merges(schedule):
    rng = random.Random(1)
    for _ in range(25):
        g = random_graph(rng, rng.randint(3, 10), rng.choice([0.2, 0.4]))
        trace = run_to_stable(g, 3, 2, schedule)
        for t in range(1, len(trace.history)):
            assert _refines(trace.history[t], trace.history[t - 1])
            assert len(set(_labels(trace.history[t]))) >= len(set(_labels(trace.history[t - 1])))


def test_max_iters_caps_history():
    trace = run_to_stable(P3, 2, 1, "parallel", max_iters=0)
    assert len(trace.history) == 1 and trace.iterations_to_stable is None


def test_bad_parameters():
    with pytest.raises(ParameterError):
        run_to_stable(P3, 2, 3)
    with pytest.raises(ParameterError):
        run_to_stable(P3, 2, 1, "async")


# ---------------------------------------------------------- fingerprints

def test_fingerprint_examples():
    rng = random.Random(2)
    g = random_graph(rng, 8, 0.4)
    ta, tb = refine_jointly([g, relabeled(rng, g)], 3, 2)
    assert graph_fingerprint(ta) == graph_fingerprint(tb)
    ta, tb = refine_jointly([C6, TWO_C3], 3, 2)
    assert graph_fingerprint(ta) != graph_fingerprint(tb)
    ta, tb = refine_jointly([K3, K3], 3, 1)
    assert ta.fingerprint() == tb.fingerprint()


def test_determinism():
    rng = random.Random(3)
    g = random_graph(rng, 10, 0.3)
    for schedule in ("parallel", "sequential"):
        a = trace_to_json(run_to_stable(g, 3, 2, schedule))
        b = trace_to_json(run_to_stable(g, 3, 2, schedule))
        assert a == b


# --------------------------------------------------------------- verdicts

@pytest.mark.parametrize("schedule", ["parallel", "sequential"])
def test_distinguish_examples(schedule):
    v = distinguish(C6, TWO_C3, 3, 2, schedule)
    assert v.distinguished and v.iteration == 0
    a, b = cfi_pair(3)
    assert distinguish(a.graph, b.graph, 3, 2, schedule).distinguished


def test_relabeled_graphs_stay_together():
    rng = random.Random(4)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 16), rng.choice([0.15, 0.3]), colors=rng.choice([1, 3]))
        h = relabeled(rng, g)
        for k, c in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)]:
            if g.n > 12 and k == 4:
                continue
            assert not distinguish(g, h, k, c).distinguished


def test_verdict_json_shape():
    d = distinguish(C6, TWO_C3, 3, 2).as_dict()
    assert d["verdict"] == "distinguished" and d["iteration"] == 0
    assert {entry["graph"] for entry in d["layers"]} == {"a", "b"}
    assert [entry["m"] for entry in d["layers"] if entry["graph"] == "a"] == [1, 2, 3]
    d = distinguish(K3, K3, 2, 1).as_dict()
    assert d["verdict"] == "indistinguishable" and d["iteration"] is None
