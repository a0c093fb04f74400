"""Reassemble a sparsified graph from generated walks.

Counting consecutive pairs over a large batch of generated walks gives a
sparse symmetric score matrix; normalized, each entry is the probability
of a pair. Edge selection then runs in three phases: one edge per node
(the row-wise argmax), greedy global top-up to the edge budget, greedy
global removal down to the budget.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .walks import walk_edges

logger = logging.getLogger(__name__)


@dataclass
class ScoreMatrix:
    """Symmetric nonnegative pair counts over unordered node pairs."""

    counts: dict = field(default_factory=dict)  # (u, v) with u < v -> count
    node_count: int = 0

    @property
    def total(self):
        return sum(self.counts.values())

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True)
class AssemblyBudget:
    """Target edge count for the assembled graph."""

    target_edges: int

    def __post_init__(self):
        if self.target_edges < 1:
            raise ValueError("target edge count must be >= 1")

    @classmethod
    def from_ratio(cls, ratio_percent, edge_count):
        """Budget d = ceil(ratio% of the original edge count)."""
        if not (0 < ratio_percent <= 100):
            raise ValueError("ratio must be in (0, 100]")
        return cls(max(1, math.ceil(ratio_percent * edge_count / 100.0)))


def count_edges(walks, node_count=None):
    """Count every non-degenerate consecutive pair across the walks."""
    if len(walks) == 0:
        raise ValueError("no walks to count")
    counts = {}
    max_node = -1
    for walk in walks:
        for u, v in walk_edges(walk):
            max_node = max(max_node, v)
            if u == v:
                continue
            counts[(u, v)] = counts.get((u, v), 0) + 1
    if node_count is None:
        node_count = max_node + 1
    return ScoreMatrix(counts, int(node_count))


def edge_probabilities(score_matrix):
    """Normalize counts into pair probabilities summing to 1."""
    total = score_matrix.total
    if total <= 0:
        raise ValueError("score matrix has no mass")
    return {pair: c / total for pair, c in score_matrix.counts.items()}


@dataclass
class AssemblyReport:
    target_edges: int
    eligible_pairs: int
    edge_count: int
    skipped_nodes: int
    artificial_edges: int | None = None

    def to_json(self):
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def count_artificial_edges(graph, original):
    """Edges of `graph` that do not exist in `original`."""
    return sum(1 for u, v in graph.edges if not original.has_edge(int(u), int(v)))


def assemble(score_matrix, budget, artificial_filter=None, mode="argmax", rng=None):
    """Select edges from the score matrix until exactly d remain.

    Phase 1 adds, for every node with a usable row, the pair with the
    highest row-normalized count. Phase 2 adds globally best unused pairs
    while below the budget; phase 3 removes globally worst present pairs
    while above it. Ties always break toward the lexicographically
    smallest pair, making the whole procedure deterministic.

    With `artificial_filter` set, pairs absent from that graph are
    ineligible in every phase, so the output is a strict subset of its
    edges. `mode="sample"` replaces the phase-2 argmax with sampling
    proportional to the pair counts (requires rng).

    Returns (graph, report). The graph has exactly d edges when at least
    d distinct eligible pairs exist; otherwise every eligible pair.
    """
    if len(score_matrix.counts) == 0:
        raise ValueError("empty score matrix")
    d = budget.target_edges

    if artificial_filter is not None:
        eligible = {p: c for p, c in score_matrix.counts.items()
                    if artificial_filter.has_edge(*p)}
        node_count = max(score_matrix.node_count, artificial_filter.node_count)
    else:
        eligible = dict(score_matrix.counts)
        node_count = score_matrix.node_count

    rows = {}
    for (u, v), c in eligible.items():
        rows.setdefault(u, []).append((v, c))
        rows.setdefault(v, []).append((u, c))

    chosen = set()

    # Phase 1: one edge per node. Row-normalized argmax equals the plain
    # row argmax; ties resolve to the lexicographically smallest pair,
    # which for a fixed row is the smallest partner id.
    for i in range(node_count):
        row = rows.get(i)
        if not row:
            continue
        best_j, _ = min(row, key=lambda jc: (-jc[1], jc[0]))
        chosen.add((i, best_j) if i < best_j else (best_j, i))
    skipped = node_count - len(rows)
    if skipped:
        logger.warning("%d node(s) have no eligible pair and stay isolated", skipped)

    # Phase 2: top up to the budget from the global ranking.
    if len(chosen) < d:
        remaining = [(pair, c) for pair, c in eligible.items() if pair not in chosen]
        if mode == "sample":
            if rng is None:
                raise ValueError("sample mode requires rng")
            while len(chosen) < d and remaining:
                weights = np.array([c for _, c in remaining], dtype=float)
                idx = int(rng.choice(len(remaining), p=weights / weights.sum()))
                chosen.add(remaining.pop(idx)[0])
        else:
            remaining.sort(key=lambda pc: (-pc[1], pc[0]))
            for pair, _ in remaining:
                if len(chosen) >= d:
                    break
                chosen.add(pair)

    # Phase 3: trim down to the budget, lowest-count pair first.
    if len(chosen) > d:
        removal_order = sorted(chosen, key=lambda p: (eligible[p], p))
        for pair in removal_order:
            if len(chosen) <= d:
                break
            chosen.discard(pair)

    graph = Graph(node_count, chosen)
    report = AssemblyReport(
        target_edges=d,
        eligible_pairs=len(eligible),
        edge_count=graph.edge_count,
        skipped_nodes=skipped,
    )
    if artificial_filter is not None:
        report.artificial_edges = 0
    return graph, report
