"""Random-walk sampling and walk/edge bookkeeping.

Walks are fixed-length node sequences. Walks sampled here respect the
graph's adjacency ("real" walks); model-generated walks reuse the same
container but may step between non-adjacent nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WalkCorpus:
    """A batch of equal-length walks plus provenance.

    `walks` is a (count, T) int array. The fingerprint records the source
    graph's (node_count, edge_count) so a trainer can refuse a corpus
    sampled from a different graph.
    """

    walks: np.ndarray
    node_count: int
    edge_count: int
    seed: int

    def __post_init__(self):
        if self.walks.ndim != 2:
            raise ValueError("walks must be a 2-d array")
        if self.walks.shape[1] < 2:
            raise ValueError("walk length must be >= 2")

    @property
    def count(self):
        return int(self.walks.shape[0])

    @property
    def walk_length(self):
        return int(self.walks.shape[1])

    def matches(self, graph):
        return (self.node_count == graph.node_count
                and self.edge_count == graph.edge_count)


def sample_walk(graph, walk_length, rng):
    """One uniform random walk of `walk_length` nodes.

    The start node is uniform over nodes with degree >= 1; every step
    moves to a uniformly random neighbor of the current node.
    """
    if walk_length < 2:
        raise ValueError("walk_length must be >= 2")
    degrees = graph.degrees()
    starts = np.flatnonzero(degrees > 0)
    if len(starts) == 0:
        raise ValueError("graph has no edges; cannot sample walks")

    walk = np.empty(walk_length, dtype=np.int64)
    node = int(starts[rng.integers(len(starts))])
    walk[0] = node
    for t in range(1, walk_length):
        nbrs = graph.neighbors(node)
        node = int(nbrs[rng.integers(len(nbrs))])
        walk[t] = node
    return walk


def sample_corpus(graph, count, walk_length, seed):
    """Sample `count` independent walks into a WalkCorpus.

    The corpus records the seed; resampling with the same arguments is
    bit-identical.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    walks = np.empty((count, walk_length), dtype=np.int64)
    for i in range(count):
        walks[i] = sample_walk(graph, walk_length, rng)
    return WalkCorpus(walks, graph.node_count, graph.edge_count, int(seed))


def random_node_corpus(graph, count, walk_length, seed):
    """Corpus of uniformly random node sequences (no adjacency).

    Used as a degenerate stand-in for the real-walk corpus when checking
    how much the walk structure itself contributes to training.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    walks = rng.integers(graph.node_count, size=(count, walk_length)).astype(np.int64)
    return WalkCorpus(walks, graph.node_count, graph.edge_count, int(seed))


def walk_edges(walk):
    """Consecutive node pairs of a walk, normalized to (min, max).

    A step that stays on the same node yields the degenerate pair (u, u);
    callers score/count such pairs as nothing.
    """
    pairs = []
    for a, b in zip(walk[:-1], walk[1:]):
        a, b = int(a), int(b)
        pairs.append((a, b) if a <= b else (b, a))
    return pairs


def is_real_walk(graph, walk):
    """True when every consecutive pair is an edge of `graph`."""
    return all(graph.has_edge(int(a), int(b)) for a, b in zip(walk[:-1], walk[1:]))


def save_corpus(corpus, path):
    """One walk per line, space-separated node ids."""
    with open(path, "w") as fh:
        fh.write(f"# nodes={corpus.node_count} edges={corpus.edge_count} "
                 f"seed={corpus.seed}\n")
        for row in corpus.walks:
            fh.write(" ".join(str(int(x)) for x in row) + "\n")


def load_corpus(path):
    rows = []
    header = {}
    with open(path, "r") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for part in line[1:].split():
                    if "=" in part:
                        k, v = part.split("=", 1)
                        header[k] = int(v)
                continue
            rows.append([int(x) for x in line.split()])
    walks = np.array(rows, dtype=np.int64)
    return WalkCorpus(walks, header.get("nodes", int(walks.max()) + 1),
                      header.get("edges", 0), header.get("seed", 0))
