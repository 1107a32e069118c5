import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msdecomp.decomposers import (
    HierarchicalParams,
    HillClimbParams,
    _SmClimber,
    class_weight_matrix,
    decompose_hierarchical,
    decompose_hillclimb,
    decompose_monolith,
    decompose_random,
    decompose_singletons,
    sm_from_labels,
)
from msdecomp.errors import BadK, BadThreshold, EmptyGraph, InfeasibleBounds
from msdecomp.ingestion import dump_decomposition
from msdecomp.metrics import compute_sm, evaluate_all
from msdecomp.model import ClassNode, Decomposition, MonolithGraph, validate_decomposition
from oracles import brute_sm, random_graph, set_partitions

EMPTY = MonolithGraph("empty", ())
ONE = MonolithGraph("one", (ClassNode("Solo"),))


def cliques(*sizes, name="cliques"):
    edges, blocks, k = [], [], 0
    for s in sizes:
        ids = [f"q{k + i}" for i in range(s)]
        edges += [(a, b) for a in ids for b in ids if a != b]
        blocks.append(frozenset(ids))
        k += s
    return MonolithGraph.from_edges(name, edges), frozenset(blocks)


@pytest.mark.parametrize("fn", [decompose_monolith, decompose_singletons,
                                lambda g: decompose_hillclimb(g),
                                lambda g: decompose_hierarchical(g, HierarchicalParams(distance_threshold=0.5))])
def test_empty_graph_rejected(fn):
    with pytest.raises(EmptyGraph):
        fn(EMPTY)


def test_monolith(g4):
    d = decompose_monolith(g4)
    assert d.block_sets() == {frozenset("ABCD")}
    r = evaluate_all(g4, d)
    assert r.icp.aggregate == 0 and r.ifn.ifn == 0
    assert decompose_monolith(ONE).block_sets() == {frozenset({"Solo"})}


def test_singletons(g4):
    d = decompose_singletons(g4)
    assert len(d.services) == 4
    r = evaluate_all(g4, d)
    assert r.sm.scoh == (0, 0, 0, 0)
    assert r.ned.ned == 1.0


def test_random(g4):
    a = decompose_random(g4, 2, seed=7)
    assert dump_decomposition(a) == dump_decomposition(decompose_random(g4, 2, seed=7))
    assert len(a.services) == 2
    assert decompose_random(g4, 4, seed=3).block_sets() == decompose_singletons(g4).block_sets()
    assert decompose_random(g4, 1, seed=3).block_sets() == decompose_monolith(g4).block_sets()
    for k in (0, 5):
        with pytest.raises(BadK):
            decompose_random(g4, k)


@pytest.mark.parametrize("seed", range(20))
def test_random_always_has_k_services(seed):
    g = random_graph(np.random.default_rng(seed), 12)
    for k in (1, 5, 11, 12):
        assert len(decompose_random(g, k, seed).services) == k


# --- hill climbing ---------------------------------------------------------

def test_two_cliques_recovered():
    g, truth = cliques(5, 5)
    best = max(brute_sm(g, p) for p in set_partitions(g.class_ids))
    assert brute_sm(g, truth) == pytest.approx(best)
    assert decompose_hillclimb(g, HillClimbParams(seed=1)).block_sets() == truth


def test_hillclimb_single_class():
    assert decompose_hillclimb(ONE).block_sets() == {frozenset({"Solo"})}


def test_hillclimb_respects_max_services(g4):
    d = decompose_hillclimb(g4, HillClimbParams(restarts=20, max_services=2, seed=0))
    best = max(brute_sm(g4, p) for p in set_partitions(g4.class_ids) if len(p) <= 2)
    assert len(d.services) <= 2
    assert evaluate_all(g4, d).sm.sm == pytest.approx(best, abs=1e-12)


def test_hillclimb_respects_min_services():
    g, _ = cliques(4, 4)
    d = decompose_hillclimb(g, HillClimbParams(min_services=3, max_services=3, seed=2))
    assert len(d.services) == 3


def test_infeasible_bounds(g4):
    with pytest.raises(InfeasibleBounds):
        HillClimbParams(min_services=3, max_services=2)
    with pytest.raises(InfeasibleBounds):
        decompose_hillclimb(g4, HillClimbParams(min_services=5))


def test_hillclimb_deterministic():
    g = random_graph(np.random.default_rng(4), 15, 0.25)
    p = HillClimbParams(restarts=5, seed=99)
    assert dump_decomposition(decompose_hillclimb(g, p)) == dump_decomposition(decompose_hillclimb(g, p))


def test_sm_from_labels_agrees_with_metrics():
    rng = np.random.default_rng(0)
    for _ in range(30):
        g = random_graph(rng, 7, self_edges=True)
        labels = rng.integers(0, 3, size=7)
        d = Decomposition.from_blocks(
            [{c for c, lab in zip(g.class_ids, labels) if lab == k} for k in sorted(set(labels))])
        assert sm_from_labels(class_weight_matrix(g), labels) == pytest.approx(
            compute_sm(g, validate_decomposition(g, d)).sm, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.floats(0.05, 0.9), st.integers(0, 2**32 - 1))
def test_incremental_move_scores_are_exact(n, p, seed):
    rng = np.random.default_rng(seed)
    weights = class_weight_matrix(random_graph(rng, n, p, self_edges=True))
    labels = np.unique(rng.integers(0, int(rng.integers(1, n + 1)), size=n), return_inverse=True)[1]
    current, moves, merges = _SmClimber(weights, 1, n).score(labels)
    assert current == pytest.approx(sm_from_labels(weights, labels), abs=1e-12)
    m = labels.max() + 1
    for c in range(n):
        for b in range(m + 1):
            if np.isfinite(moves[c, b]):
                moved = labels.copy()
                moved[c] = b
                assert moves[c, b] == pytest.approx(sm_from_labels(weights, moved), abs=1e-12)
    for i in range(m):
        for j in range(i + 1, m):
            merged = np.where(labels == j, i, labels)
            assert merges[i, j] == pytest.approx(sm_from_labels(weights, merged), abs=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_hillclimb_beats_random_baseline(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(6, 25)), float(rng.uniform(0.05, 0.5)))
    d = decompose_hillclimb(g, HillClimbParams(restarts=5, seed=seed))
    sm = evaluate_all(g, d).sm.sm
    assert sm >= evaluate_all(g, decompose_random(g, len(d.services), seed)).sm.sm - 1e-12


def test_climb_never_worse_than_start():
    rng = np.random.default_rng(11)
    weights = class_weight_matrix(random_graph(rng, 14, 0.3))
    climber = _SmClimber(weights, 1, 14)
    for _ in range(20):
        start = np.unique(rng.integers(0, 6, size=14), return_inverse=True)[1]
        _, sm = climber.climb(start, 200)
        assert sm >= sm_from_labels(weights, start) - 1e-12


# --- hierarchical ---------------------------------------------------------

def components(graph):
    parent = {c: c for c in graph.class_ids}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in graph.edges:
        parent[find(e.src)] = find(e.dst)
    groups = {}
    for c in graph.class_ids:
        groups.setdefault(find(c), set()).add(c)
    return frozenset(frozenset(v) for v in groups.values())


@pytest.mark.parametrize("seed", range(10))
def test_components_separate(seed):
    rng = np.random.default_rng(seed)
    edges = []
    for prefix, size in (("a", int(rng.integers(3, 8))), ("b", int(rng.integers(3, 8)))):
        ids = [f"{prefix}{i}" for i in range(size)]
        edges += [(ids[i], ids[(i + 1) % size]) for i in range(size)]  # ring keeps it connected
        edges += [(x, y) for x in ids for y in ids if x != y and rng.random() < 0.5 and (x, y) not in edges]
    g = MonolithGraph.from_edges("two", edges)
    comps = components(g)
    assert len(comps) == 2
    assert decompose_hierarchical(g, HierarchicalParams(distance_threshold=0.99)).block_sets() == comps


def test_hierarchical_trivial_cases():
    assert decompose_hierarchical(ONE, HierarchicalParams(distance_threshold=0.5)).block_sets() == \
        {frozenset({"Solo"})}
    g, _ = cliques(6)
    assert len(decompose_hierarchical(g, HierarchicalParams(target_clusters=1)).services) == 1


def test_hierarchical_isolated_classes_are_singletons():
    g = MonolithGraph.from_edges("iso", [("A", "B"), ("B", "A")], classes=["A", "B", "X", "Y"])
    d = decompose_hierarchical(g, HierarchicalParams(distance_threshold=0.5))
    assert d.block_sets() == {frozenset("AB"), frozenset("X"), frozenset("Y")}


def test_min_cluster_size_folds_small_clusters():
    g, truth = cliques(6, 2)
    g = MonolithGraph(g.name, g.classes, g.edges + tuple(
        MonolithGraph.from_edges("x", [("q6", "q0")]).edges))
    d = decompose_hierarchical(g, HierarchicalParams(distance_threshold=0.5, min_cluster_size=3))
    assert d.block_sets() == {frozenset(c.id for c in g.classes)}
    validate_decomposition(g, d)


@pytest.mark.parametrize("linkage", ["average", "single", "complete"])
def test_linkages_find_cliques(linkage):
    g, truth = cliques(4, 6, 5)
    assert decompose_hierarchical(g, HierarchicalParams(linkage, distance_threshold=0.5)).block_sets() == truth
    assert decompose_hierarchical(g, HierarchicalParams(linkage, target_clusters=3)).block_sets() == truth


def test_hierarchical_bad_params(g4):
    with pytest.raises(BadThreshold):
        HierarchicalParams(distance_threshold=0.0)
    with pytest.raises(BadThreshold):
        HierarchicalParams(distance_threshold=1.5)
    with pytest.raises(ValueError):
        HierarchicalParams(distance_threshold=0.5, target_clusters=2)
    with pytest.raises(BadK):
        decompose_hierarchical(g4, HierarchicalParams(target_clusters=9))


@pytest.mark.parametrize("seed", range(10))
def test_every_decomposer_output_validates(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(1, 20)), 0.2)
    outs = [decompose_monolith(g), decompose_singletons(g), decompose_random(g, max(1, len(g) // 2), seed),
            decompose_hillclimb(g, HillClimbParams(restarts=3, seed=seed)),
            decompose_hierarchical(g, HierarchicalParams(distance_threshold=0.7)),
            decompose_hierarchical(g, HierarchicalParams(target_clusters=max(1, len(g) // 3), min_cluster_size=2))]
    for d in outs:
        validate_decomposition(g, d)
