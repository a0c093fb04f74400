"""Edge-importance scores and the walk-level reward.

Scores are defined for ANY node pair, adjacent or not: that is what lets
pairs absent from the input graph be rated highly and surface later as
artificial edges. All scores are computed against one fixed graph, so a
memoizing scorer is safe for the whole of a training run.
"""

from __future__ import annotations

import enum

import numpy as np

from .graph import neighborhood_union_subgraph, subgraph_density
from .walks import walk_edges


class RewardKind(enum.Enum):
    JACCARD = "jaccard"
    DENSITY_JACCARD = "density_jaccard"
    UNIT = "unit"


def jaccard(graph, u, v):
    """Neighborhood overlap |N_u ∩ N_v| / |N_u ∪ N_v|; 0 on empty union."""
    if u == v:
        raise ValueError("endpoints must differ")
    nu = graph.neighbors(u)
    nv = graph.neighbors(v)
    inter = len(np.intersect1d(nu, nv, assume_unique=True))
    union = len(nu) + len(nv) - inter
    if union == 0:
        return 0.0
    return inter / union


def density_jaccard(graph, u, v):
    """Jaccard divided by the density of the induced N_u ∪ N_v subgraph.

    Two guards keep the value finite: an empty or single-node union has
    density 1 by definition, and a multi-node union with zero edges is
    floored at the density of one hypothetical edge. Pairs with zero
    Jaccard score 0 regardless of density.
    """
    j = jaccard(graph, u, v)
    if j == 0.0:
        return 0.0
    sub, _ = neighborhood_union_subgraph(graph, u, v)
    d = subgraph_density(sub)
    if d == 0.0:
        n = sub.node_count
        d = 2.0 / (n * (n - 1))
    return j / d


def f_score(graph, edge, kind):
    """Importance of one walk edge under the selected measure.

    Degenerate pairs (u == v) score 0 under every kind.
    """
    u, v = edge
    if u == v:
        return 0.0
    if kind is RewardKind.UNIT:
        return 1.0
    if kind is RewardKind.JACCARD:
        return jaccard(graph, u, v)
    if kind is RewardKind.DENSITY_JACCARD:
        return density_jaccard(graph, u, v)
    raise ValueError(f"unknown reward kind: {kind!r}")


def walk_reward(graph, walk, critic_score, kind, scorer=None):
    """Reward for one generated walk.

    When the critic's score is negative the reward is the sum of the edge
    importances along the walk; otherwise it is 1.
    """
    if critic_score >= 0:
        return 1.0
    if scorer is None:
        return float(sum(f_score(graph, e, kind) for e in walk_edges(walk)))
    return float(sum(scorer.score(e) for e in walk_edges(walk)))


class EdgeScorer:
    """Memoizing f_score wrapper for a fixed (graph, kind).

    Valid because scores target the original graph for the lifetime of a
    training run; the environment never changes.
    """

    def __init__(self, graph, kind):
        self.graph = graph
        self.kind = kind
        self._cache = {}

    def score(self, edge):
        u, v = edge
        if u == v:
            return 0.0
        key = (u, v) if u < v else (v, u)
        val = self._cache.get(key)
        if val is None:
            val = f_score(self.graph, key, self.kind)
            self._cache[key] = val
        return val

    def walk_score_sum(self, walk):
        return float(sum(self.score(e) for e in walk_edges(walk)))
