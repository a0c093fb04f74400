"""Comparison sparsifiers that select among existing edges only.

Every method returns a graph on the same node set with exactly d edges,
a subset of the input's edges, deterministically (given a seed where
randomness is involved). Ranking ties always break toward the
lexicographically smallest (u, v) pair.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction

import numpy as np

from .graph import Graph
from .scoring import jaccard


def rank_edges(scored):
    """Sort (pair, score) items descending by score, ties by pair."""
    return sorted(scored, key=lambda ps: (-ps[1], ps[0]))


def _check_budget(graph, d):
    if d < 1:
        raise ValueError("edge budget must be >= 1")
    if d > graph.edge_count:
        raise ValueError(f"budget {d} exceeds edge count {graph.edge_count}")


def _top_d(graph, scored, d):
    keep = [pair for pair, _ in rank_edges(scored)[:d]]
    return Graph(graph.node_count, keep)


def sparsify_jc(graph, d):
    """Keep the d existing edges with the highest neighborhood overlap."""
    _check_budget(graph, d)
    scored = [((int(u), int(v)), jaccard(graph, int(u), int(v)))
              for u, v in graph.edges]
    return _top_d(graph, scored, d)


def edge_betweenness(graph):
    """Exact unnormalized edge betweenness over unordered node pairs.

    Per-source BFS with dependency accumulation; shortest-path counts and
    dependencies are kept as exact rationals so results match path
    enumeration bit for bit. Each unordered source-target pair is counted
    once (the two-directions sum is halved).
    """
    cb = {(int(u), int(v)): Fraction(0) for u, v in graph.edges}
    n = graph.node_count

    for s in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        sigma = [0] * n
        preds = [[] for _ in range(n)]
        order = []
        dist[s] = 0
        sigma[s] = 1
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in graph.neighbors(v):
                w = int(w)
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)

        delta = [Fraction(0)] * n
        for w in reversed(order):
            for v in preds[w]:
                contrib = Fraction(sigma[v], sigma[w]) * (1 + delta[w])
                key = (v, w) if v < w else (w, v)
                cb[key] += contrib
                delta[v] += contrib

    return {pair: val / 2 for pair, val in cb.items()}


def sparsify_bc(graph, d):
    """Keep the d edges with the highest betweenness centrality."""
    _check_budget(graph, d)
    scored = list(edge_betweenness(graph).items())
    return _top_d(graph, scored, d)


def sparsify_random(graph, d, rng):
    """Keep a uniformly random d-subset of the edges."""
    _check_budget(graph, d)
    idx = rng.choice(graph.edge_count, size=d, replace=False)
    keep = [(int(u), int(v)) for u, v in graph.edges[np.sort(idx)]]
    return Graph(graph.node_count, keep)


def _per_node_union(graph, incident_ranked, exponent):
    """Union of each node's top ceil(degree^exponent) ranked edges."""
    union = set()
    for i, ranked in enumerate(incident_ranked):
        deg = len(ranked)
        if deg == 0:
            continue
        keep = min(deg, math.ceil(deg ** exponent))
        union.update(ranked[:keep])
    return union


def _search_exponent(graph, incident_ranked, d):
    """Smallest exponent in [0, 1] whose per-node union reaches d edges.

    The union size is nondecreasing in the exponent, so a bisection
    suffices; the budget precondition d <= |E| guarantees exponent 1
    always works.
    """
    union = _per_node_union(graph, incident_ranked, 0.0)
    if len(union) >= d:
        return union
    lo, hi = 0.0, 1.0
    union = _per_node_union(graph, incident_ranked, hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        mid_union = _per_node_union(graph, incident_ranked, mid)
        if len(mid_union) >= d:
            hi, union = mid, mid_union
        else:
            lo = mid
    return union


def sparsify_lspar(graph, d):
    """Per-node top-degree^r edges by neighborhood overlap, trimmed to d.

    Every node keeps its ceil(degree^r) most similar incident edges; the
    exponent is bisected so the union lands nearest above d, then the
    union is trimmed to exactly d by the global overlap ranking.
    """
    _check_budget(graph, d)
    jc = {(int(u), int(v)): jaccard(graph, int(u), int(v)) for u, v in graph.edges}

    incident_ranked = []
    for i in range(graph.node_count):
        pairs = [(i, int(j)) if i < j else (int(j), i) for j in graph.neighbors(i)]
        pairs.sort(key=lambda p: (-jc[p], p))
        incident_ranked.append(pairs)

    union = _search_exponent(graph, incident_ranked, d)
    return _top_d(graph, [(p, jc[p]) for p in union], d)


def sparsify_ld(graph, d):
    """Per-node edges toward the highest-degree neighbors, trimmed to d.

    Each node ranks its incident edges by the far endpoint's degree and
    keeps ceil(degree^a) of them; the exponent is bisected as in
    sparsify_lspar. The global trim ranks an edge by the larger endpoint
    degree (the hub it leads to).
    """
    _check_budget(graph, d)
    degrees = graph.degrees()

    incident_ranked = []
    for i in range(graph.node_count):
        pairs = [(int(j), (i, int(j)) if i < j else (int(j), i))
                 for j in graph.neighbors(i)]
        pairs.sort(key=lambda jp: (-degrees[jp[0]], jp[1]))
        incident_ranked.append([p for _, p in pairs])

    union = _search_exponent(graph, incident_ranked, d)
    scored = [(p, max(int(degrees[p[0]]), int(degrees[p[1]]))) for p in union]
    return _top_d(graph, scored, d)
