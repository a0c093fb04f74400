"""Immutable undirected graph with dense integer node ids.

The graph is stored in CSR form (index pointer + sorted neighbor arrays)
and never mutated after construction, so it can be shared freely between
threads and cached scorers. File ingestion relabels arbitrary node tokens
to dense ids in [0, N) and remembers the mapping for export.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)


class EdgeListFormatError(ValueError):
    """Raised for unparseable edge-list lines; carries the line number."""


class Graph:
    """Undirected simple graph: no self-loops, no duplicate edges.

    Node ids are dense integers in [0, node_count). Neighbor lists are
    sorted ascending.
    """

    __slots__ = ("node_count", "_indptr", "_indices", "_edges")

    def __init__(self, node_count, edges):
        """Build from an iterable of (u, v) pairs.

        Pairs are normalized to u < v and deduplicated. Self-loops and
        out-of-range ids are rejected.
        """
        n = int(node_count)
        if n < 0:
            raise ValueError("node_count must be >= 0")
        self.node_count = n

        pair_set = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop ({u},{u}) not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for {n} nodes")
            pair_set.add((u, v) if u < v else (v, u))

        if pair_set:
            edge_arr = np.array(sorted(pair_set), dtype=np.int64)
        else:
            edge_arr = np.empty((0, 2), dtype=np.int64)
        self._edges = edge_arr

        # CSR adjacency: each undirected edge appears in both endpoint rows.
        both_u = np.concatenate([edge_arr[:, 0], edge_arr[:, 1]])
        both_v = np.concatenate([edge_arr[:, 1], edge_arr[:, 0]])
        order = np.lexsort((both_v, both_u))
        self._indices = both_v[order]
        self._indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(self._indptr, both_u + 1, 1)
        np.cumsum(self._indptr, out=self._indptr)

    @property
    def edge_count(self):
        return int(self._edges.shape[0])

    @property
    def edges(self):
        """(E, 2) int array of edges with u < v, lexicographically sorted."""
        return self._edges

    def degrees(self):
        """Degree of every node as an int array of length node_count."""
        return np.diff(self._indptr)

    def degree(self, u):
        self._check_node(u)
        return int(self._indptr[u + 1] - self._indptr[u])

    def neighbors(self, u):
        """Sorted neighbor ids of u (a read-only view)."""
        self._check_node(u)
        return self._indices[self._indptr[u]:self._indptr[u + 1]]

    def has_edge(self, u, v):
        self._check_node(u)
        self._check_node(v)
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < len(row) and row[i] == v)

    def edge_set(self):
        """Edges as a set of (u, v) tuples with u < v."""
        return {(int(u), int(v)) for u, v in self._edges}

    def _check_node(self, u):
        if not (0 <= u < self.node_count):
            raise ValueError(f"node {u} out of range [0, {self.node_count})")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_count == other.node_count
                and np.array_equal(self._edges, other._edges))

    def __repr__(self):
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"


@dataclass(frozen=True)
class NodeRelabeling:
    """Bijection between original node tokens and dense ids."""

    originals: tuple  # originals[dense_id] -> original token (str)

    def __post_init__(self):
        if len(set(self.originals)) != len(self.originals):
            raise ValueError("original tokens are not unique")

    @classmethod
    def identity(cls, node_count):
        return cls(tuple(str(i) for i in range(node_count)))

    def dense(self, token):
        return self._index()[token]

    def original(self, dense_id):
        return self.originals[dense_id]

    def _index(self):
        # Rebuilt on demand; cheap relative to file I/O and keeps the
        # dataclass hashable/frozen.
        return {tok: i for i, tok in enumerate(self.originals)}


def load_edge_list(path):
    """Read an edge-list text file into (Graph, NodeRelabeling).

    Format: one edge per line, two whitespace-separated tokens; lines
    starting with '#' and blank lines are ignored. Duplicate edges and
    self-loops are dropped (counted and logged as warnings); a self-loop
    line still registers its node, which is how exported isolated nodes
    survive a round trip. Node ids may be arbitrary tokens; they are
    relabeled densely in order of first appearance.
    """
    path = Path(path)
    tokens = {}
    originals = []
    pair_set = set()
    duplicates = 0
    self_loops = 0

    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListFormatError(
                    f"{path}:{lineno}: expected two tokens, got {len(parts)}: {raw!r}")
            ids = []
            for tok in parts:
                if tok not in tokens:
                    tokens[tok] = len(originals)
                    originals.append(tok)
                ids.append(tokens[tok])
            u, v = ids
            if u == v:
                self_loops += 1
                continue
            pair = (u, v) if u < v else (v, u)
            if pair in pair_set:
                duplicates += 1
                continue
            pair_set.add(pair)

    if duplicates:
        logger.warning("%s: dropped %d duplicate edge(s)", path, duplicates)
    if self_loops:
        logger.warning("%s: dropped %d self-loop(s)", path, self_loops)

    graph = Graph(len(originals), pair_set)
    return graph, NodeRelabeling(tuple(originals))


def export_edge_list(graph, relabel, path):
    """Write a graph back to edge-list text using original node tokens.

    Isolated nodes are emitted as self-loop lines ("u u"): the loader
    drops the loop but registers the node, so load(export(g)) reproduces
    both the node set and the edge set.
    """
    if relabel is None:
        relabel = NodeRelabeling.identity(graph.node_count)
    if len(relabel.originals) != graph.node_count:
        raise ValueError("relabeling size does not match graph")

    degrees = graph.degrees()
    with open(path, "w") as fh:
        for u, v in graph.edges:
            fh.write(f"{relabel.original(u)} {relabel.original(v)}\n")
        for u in np.flatnonzero(degrees == 0):
            tok = relabel.original(int(u))
            fh.write(f"{tok} {tok}\n")


def neighborhood_union_subgraph(graph, u, v):
    """Induced subgraph on N_u ∪ N_v.

    Returns (sub, vertices): `sub` is the induced subgraph with its nodes
    relabeled densely, `vertices` the sorted union as ids of the parent
    graph. The endpoints themselves belong to the union only when they
    are adjacent to the other endpoint.
    """
    if u == v:
        raise ValueError("endpoints must differ")
    union = np.union1d(graph.neighbors(u), graph.neighbors(v))
    member = np.zeros(graph.node_count, dtype=bool)
    member[union] = True

    edges = []
    for i, w in enumerate(union):
        row = graph.neighbors(int(w))
        for x in row[member[row]]:
            j = int(np.searchsorted(union, x))
            if i < j:
                edges.append((i, j))
    return Graph(len(union), edges), union


def subgraph_density(sub):
    """Edge density 2|E| / (|V|(|V|-1)), defined as 1.0 when |V| <= 1.

    The degenerate value keeps density-normalized scores equal to their
    unnormalized form on trivial neighborhoods instead of dividing 0/0.
    """
    n = sub.node_count
    if n <= 1:
        return 1.0
    return 2.0 * sub.edge_count / (n * (n - 1))


def load_labels(path, relabel, node_count):
    """Read a "node label" file into a label array indexed by dense id.

    Same comment/blank-line rules as edge lists. If a node is listed more
    than once, the first occurrence wins. Every node of the graph must be
    covered; labels for unknown tokens are ignored with a warning.
    """
    path = Path(path)
    labels = np.full(node_count, -1, dtype=np.int64)
    seen = np.zeros(node_count, dtype=bool)
    index = {tok: i for i, tok in enumerate(relabel.originals)}
    unknown = 0

    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListFormatError(
                    f"{path}:{lineno}: expected 'node label', got {raw!r}")
            tok, lab = parts
            dense = index.get(tok)
            if dense is None:
                unknown += 1
                continue
            if not seen[dense]:
                seen[dense] = True
                labels[dense] = int(lab)

    if unknown:
        logger.warning("%s: ignored %d label(s) for unknown nodes", path, unknown)
    if not seen.all():
        missing = int((~seen).sum())
        raise ValueError(f"{path}: {missing} node(s) have no label")
    return labels


def export_labels(labels, relabel, path):
    """Write a label array back to "node label" text rows."""
    if relabel is None:
        relabel = NodeRelabeling.identity(len(labels))
    with open(path, "w") as fh:
        for dense, lab in enumerate(labels):
            fh.write(f"{relabel.original(dense)} {int(lab)}\n")
