"""Baseline decomposers that turn a monolith graph into candidate services.

``monolith``, ``singletons`` and ``random`` are reference points. The
``hillclimb`` decomposer maximises SM by relocating one class at a time, and
``hierarchical`` runs agglomerative clustering on call-profile similarity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist, squareform

from msdecomp.errors import BadK, BadThreshold, EmptyGraph, InfeasibleBounds
from msdecomp.metrics import DEFAULT_POLICY, EdgePolicy, sm_edge_weights
from msdecomp.model import Decomposition, MonolithGraph, Service

IMPROVEMENT_EPS = 1e-12


def _require_classes(graph: MonolithGraph) -> None:
    if len(graph) == 0:
        raise EmptyGraph(f"graph {graph.name!r} has no classes")


def _from_labels(graph: MonolithGraph, labels, tool: str) -> Decomposition:
    """Services numbered by first appearance in graph class order; empty labels vanish."""
    order: dict[int, list[str]] = {}
    for cid, lab in zip(graph.class_ids, labels):
        order.setdefault(int(lab), []).append(cid)
    services = tuple(Service(f"service-{i}", frozenset(members)) for i, members in enumerate(order.values()))
    return Decomposition(tool, graph.name, services)


def decompose_monolith(graph: MonolithGraph) -> Decomposition:
    _require_classes(graph)
    return _from_labels(graph, [0] * len(graph), "monolith")


def decompose_singletons(graph: MonolithGraph) -> Decomposition:
    _require_classes(graph)
    return _from_labels(graph, range(len(graph)), "singletons")


def _random_labels(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    labels = rng.integers(0, k, size=n)
    counts = np.bincount(labels, minlength=k)
    for empty in range(k):
        if counts[empty] == 0:
            donor = int(np.argmax(counts))
            victim = int(np.nonzero(labels == donor)[0][-1])
            labels[victim] = empty
            counts[donor] -= 1
            counts[empty] += 1
    return labels


def decompose_random(graph: MonolithGraph, k: int, seed: int = 0) -> Decomposition:
    """Uniform random assignment to ``k`` services.

    Empty buckets are refilled with the last class of the current largest
    bucket, so the result always has exactly ``k`` services.
    """
    _require_classes(graph)
    if not 1 <= k <= len(graph):
        raise BadK(f"k must lie in [1, {len(graph)}], got {k}")
    labels = _random_labels(len(graph), k, np.random.default_rng(seed))
    return _from_labels(graph, labels, "random")


# --- SM hill climbing ------------------------------------------------------

@dataclass(frozen=True)
class HillClimbParams:
    restarts: int = 20
    max_iterations: int | None = None  # default: 10 * number of classes
    min_services: int | None = None
    max_services: int | None = None
    seed: int = 0
    policy: EdgePolicy = field(default=DEFAULT_POLICY)

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.min_services is not None and self.max_services is not None \
                and self.min_services > self.max_services:
            raise InfeasibleBounds(f"min_services {self.min_services} > max_services {self.max_services}")


def class_weight_matrix(graph: MonolithGraph, policy: EdgePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Dense ``n x n`` matrix of the call weights that feed SM."""
    pos = {cid: i for i, cid in enumerate(graph.class_ids)}
    c = np.zeros((len(pos), len(pos)))
    for src, dst, w in sm_edge_weights(graph, policy):
        c[pos[src], pos[dst]] += w
    return c


def sm_from_labels(weights: np.ndarray, labels: np.ndarray) -> float:
    """SM of a labelling, computed from the block weight matrix."""
    _, labels = np.unique(labels, return_inverse=True)
    h = np.eye(labels.max() + 1)[labels]
    w = h.T @ weights @ h
    u = 1.0 / h.sum(axis=0)
    m = len(u)
    cohesion = float(np.sum(np.diag(w) * u * u))
    total = float(u @ w @ u)
    if m == 1:
        return cohesion
    return cohesion / m - (total - cohesion) / (m * (m - 1))


class _SmClimber:
    """Steepest-ascent SM search over one labelling.

    Writing W for the block-to-block weight matrix and u_i = 1/m_i,
    SM = A/M - (T - A)/(M(M-1)) with A = sum_i W_ii u_i^2 and T = u'Wu.
    Relocating a class from block a to block b, or merging blocks a and b,
    only touches rows and columns a and b of W, so every candidate is
    scored in O(1) from per-block sums, vectorised over all candidates.
    """

    def __init__(self, weights: np.ndarray, lo: int, hi: int):
        self.c = weights
        self.self_w = np.diag(weights).copy()
        self.c0 = weights - np.diag(self.self_w)
        self.lo, self.hi = lo, hi

    def _blocks(self, labels: np.ndarray):
        n = len(labels)
        m_blocks = int(labels.max()) + 1
        h = np.zeros((n, m_blocks + 1))  # trailing column is the fresh, empty block
        h[np.arange(n), labels] = 1.0
        w = h.T @ self.c @ h
        sizes = h.sum(axis=0)
        u = np.divide(1.0, sizes, out=np.zeros_like(sizes), where=sizes > 0)
        diag = np.diag(w)
        a_sum = float(np.sum(diag * u * u))
        t_sum = float(u @ w @ u)
        sym = w + w.T
        return h, sizes, u, diag, sym, a_sum, t_sum, m_blocks

    @staticmethod
    def _sm(a_sum, t_sum, m):
        m = np.asarray(m, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(m > 1, a_sum / m - (t_sum - a_sum) / (m * (m - 1)), a_sum)

    def score(self, labels: np.ndarray):
        """Current SM, SM after each relocation ``(n, M+1)`` and after each merge ``(M+1, M+1)``.

        Infeasible or no-op moves score ``-inf``.
        """
        h, sizes, u, diag, sym, a_sum, t_sum, m_blocks = self._blocks(labels)
        current = float(self._sm(a_sum, t_sum, m_blocks))
        r = sym @ u

        # relocation of class c from block a to block b
        g = self.c0 @ h + self.c0.T @ h  # weight between each class and each block
        big_g = g @ u
        a = labels[:, None]
        b = np.arange(m_blocks + 1)[None, :]
        ua, ub = u[a], u[b]
        ma, mb = sizes[a], sizes[b]
        waa, wbb = diag[a], diag[b]
        sab = sym[a, b]
        ga = np.take_along_axis(g, a, axis=1)
        s = self.self_w[:, None]
        xa = r[a] - 2 * waa * ua - sab * ub
        xb = r[b] - 2 * wbb * ub - sab * ua
        rest = big_g[:, None] - ga * ua - g * ub
        old_r = ua * xa + ub * xb + waa * ua**2 + wbb * ub**2 + sab * ua * ub
        ua2 = np.where(ma > 1, 1.0 / np.maximum(ma - 1, 1), 0.0)
        ub2 = 1.0 / (mb + 1)
        waa2 = waa - ga - s
        wbb2 = wbb + g + s
        sab2 = sab - g + ga
        new_r = ua2 * (xa - rest) + ub2 * (xb + rest) + waa2 * ua2**2 + wbb2 * ub2**2 + sab2 * ua2 * ub2
        m2 = m_blocks - (ma == 1) + (b == m_blocks)
        a2 = a_sum - waa * ua**2 - wbb * ub**2 + waa2 * ua2**2 + wbb2 * ub2**2
        moves = self._sm(a2, t_sum - old_r + new_r, m2)
        valid = (b != a) & (m2 >= self.lo) & (m2 <= self.hi) & ~((b == m_blocks) & (ma == 1))
        moves = np.where(valid, moves, -np.inf)

        # merge of blocks i < j
        i = np.arange(m_blocks + 1)[:, None]
        j = i.T
        ui, uj = u[i], u[j]
        sij = sym[i, j]
        xi = r[i] - 2 * diag[i] * ui - sij * uj
        xj = r[j] - 2 * diag[j] * uj - sij * ui
        wm = diag[i] + diag[j] + sij
        um = 1.0 / np.maximum(sizes[i] + sizes[j], 1)
        old_r = ui * xi + uj * xj + diag[i] * ui**2 + diag[j] * uj**2 + sij * ui * uj
        new_r = um * (xi + xj) + wm * um**2
        a2 = a_sum - diag[i] * ui**2 - diag[j] * uj**2 + wm * um**2
        merges = self._sm(a2, t_sum - old_r + new_r, m_blocks - 1)
        valid = (i < j) & (j < m_blocks) & (m_blocks - 1 >= self.lo)
        merges = np.where(valid, merges, -np.inf)
        return current, moves, merges

    def climb(self, labels: np.ndarray, max_iterations: int) -> tuple[np.ndarray, float]:
        labels = labels.copy()
        for _ in range(max_iterations):
            current, moves, merges = self.score(labels)
            best_move = int(np.argmax(moves))
            best_merge = int(np.argmax(merges))
            gain_move = moves.flat[best_move] - current
            gain_merge = merges.flat[best_merge] - current
            if max(gain_move, gain_merge) <= IMPROVEMENT_EPS:
                return labels, current
            if gain_move >= gain_merge:
                cls, target = divmod(best_move, moves.shape[1])
                source = labels[cls]
                labels[cls] = target
            else:
                target, source = divmod(best_merge, merges.shape[1])
                labels[labels == source] = target
            if not np.any(labels == source):
                labels[labels > source] -= 1
        current, _, _ = self.score(labels)
        return labels, current


def decompose_hillclimb(graph: MonolithGraph, params: HillClimbParams | None = None) -> Decomposition:
    """Best-of-restarts steepest-ascent SM search.

    Each restart starts from a random labelling with a service count drawn
    uniformly from the allowed range, then repeatedly applies the single move
    that raises SM most. A move either relocates one class (to an existing
    service or a fresh one) or merges two services; merges let the search
    escape optima where a dense block is split across services.
    Restarts draw from independent child streams of ``params.seed``; the
    highest SM wins, earliest restart on ties.

    Raises:
        EmptyGraph: graph has no classes.
        InfeasibleBounds: service-count bounds admit no partition.
    """
    params = params or HillClimbParams()
    _require_classes(graph)
    n = len(graph)
    lo = params.min_services if params.min_services is not None else 1
    hi = params.max_services if params.max_services is not None else n
    hi = min(hi, n)
    if lo < 1 or lo > hi:
        raise InfeasibleBounds(f"no partition of {n} classes has between {lo} and {hi} services")
    max_iter = params.max_iterations if params.max_iterations is not None else 10 * n
    climber = _SmClimber(class_weight_matrix(graph, params.policy), lo, hi)
    best_labels, best_sm = None, -np.inf
    for child in np.random.SeedSequence(params.seed).spawn(params.restarts):
        rng = np.random.default_rng(child)
        k = int(rng.integers(lo, hi + 1))
        labels, sm = climber.climb(_random_labels(n, k, rng), max_iter)
        if sm > best_sm + IMPROVEMENT_EPS:
            best_labels, best_sm = labels, sm
    return _from_labels(graph, best_labels, "hillclimb")


# --- hierarchical clustering ---------------------------------------------

class Linkage(str, enum.Enum):
    AVERAGE = "average"
    SINGLE = "single"
    COMPLETE = "complete"


@dataclass(frozen=True)
class HierarchicalParams:
    """Exactly one of ``distance_threshold`` and ``target_clusters`` must be set."""

    linkage: Linkage = Linkage.AVERAGE
    distance_threshold: float | None = None
    target_clusters: int | None = None
    min_cluster_size: int = 1

    def __post_init__(self):
        object.__setattr__(self, "linkage", Linkage(self.linkage))
        if (self.distance_threshold is None) == (self.target_clusters is None):
            raise ValueError("set exactly one of distance_threshold and target_clusters")
        if self.distance_threshold is not None and not 0 < self.distance_threshold <= 1:
            raise BadThreshold(f"distance_threshold must lie in (0, 1], got {self.distance_threshold}")
        if self.min_cluster_size < 1:
            raise ValueError("min_cluster_size must be >= 1")


def similarity_profiles(graph: MonolithGraph) -> np.ndarray:
    """Symmetrised call-count rows with a unit self weight.

    Counts from both edge kinds are summed; self-edges are ignored.
    """
    pos = {cid: i for i, cid in enumerate(graph.class_ids)}
    adj = np.zeros((len(pos), len(pos)))
    for e in graph.edges:
        if e.src != e.dst:
            adj[pos[e.src], pos[e.dst]] += e.count
    adj = adj + adj.T
    np.fill_diagonal(adj, 1.0)
    return adj


def _cluster_distance(dist: np.ndarray, x: list[int], y: list[int], method: Linkage) -> float:
    block = dist[np.ix_(x, y)]
    if method is Linkage.SINGLE:
        return float(block.min())
    if method is Linkage.COMPLETE:
        return float(block.max())
    return float(block.mean())


def decompose_hierarchical(graph: MonolithGraph, params: HierarchicalParams) -> Decomposition:
    """Agglomerative clustering on cosine distance between call profiles.

    Classes with no calls to or from other classes become singleton services
    before clustering. Clusters below ``min_cluster_size`` are then folded
    into their nearest cluster under the same linkage.

    Raises:
        EmptyGraph: graph has no classes.
        BadK: ``target_clusters`` outside [1, number of classes].
    """
    _require_classes(graph)
    n = len(graph)
    if params.target_clusters is not None and not 1 <= params.target_clusters <= n:
        raise BadK(f"target_clusters must lie in [1, {n}], got {params.target_clusters}")
    prof = similarity_profiles(graph)
    dist = np.clip(squareform(pdist(prof, metric="cosine")), 0.0, 1.0) if n > 1 else np.zeros((1, 1))
    isolated = np.nonzero(prof.sum(axis=1) == 1.0)[0]
    linked = np.nonzero(prof.sum(axis=1) > 1.0)[0]

    clusters: list[list[int]] = []
    if len(linked) >= 2:
        sub = dist[np.ix_(linked, linked)]
        tree = linkage(squareform(sub, checks=False), method=params.linkage.value)
        if params.distance_threshold is not None:
            flat = fcluster(tree, t=params.distance_threshold, criterion="distance")
        else:
            want = max(1, params.target_clusters - len(isolated))
            flat = fcluster(tree, t=want, criterion="maxclust")
        groups: dict[int, list[int]] = {}
        for idx, lab in zip(linked, flat):
            groups.setdefault(int(lab), []).append(int(idx))
        clusters.extend(groups.values())
    clusters.extend([int(i)] for i in isolated)
    if params.target_clusters == 1:
        clusters = [list(range(n))]

    while len(clusters) > 1:
        small = [i for i, cl in enumerate(clusters) if len(cl) < params.min_cluster_size]
        if not small:
            break
        victim = min(small, key=lambda i: (len(clusters[i]), min(clusters[i])))
        others = [j for j in range(len(clusters)) if j != victim]
        target = min(others, key=lambda j: (_cluster_distance(dist, clusters[victim], clusters[j], params.linkage),
                                            min(clusters[j])))
        clusters[target] = clusters[target] + clusters[victim]
        del clusters[victim]

    labels = np.empty(n, dtype=int)
    for lab, members in enumerate(clusters):
        labels[members] = lab
    return _from_labels(graph, labels, "hierarchical")
