"""Community detection algorithms and partition-quality metrics.

Partitions are int label arrays indexed by dense node id. Every node is
always labeled; nodes isolated by aggressive sparsification end up as
singleton communities and are included in metric computations, which
penalizes sparsifiers that shatter the graph.
"""

from __future__ import annotations

import time
from fractions import Fraction
from math import comb

import numpy as np


def canonicalize_labels(labels):
    """Relabel communities as 0, 1, ... in order of first appearance."""
    mapping = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        lab = int(lab)
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out[i] = mapping[lab]
    return out


def modularity(graph, labels):
    """Newman modularity Q = sum_c [e_c/m - (deg_c/2m)^2].

    Defined as 0.0 for a graph with no edges.
    """
    if len(labels) != graph.node_count:
        raise ValueError("partition does not cover the graph")
    m = graph.edge_count
    if m == 0:
        return 0.0
    labels = np.asarray(labels)
    degrees = graph.degrees()

    intra = {}
    for u, v in graph.edges:
        if labels[u] == labels[v]:
            c = int(labels[u])
            intra[c] = intra.get(c, 0) + 1
    deg_sum = {}
    for u in range(graph.node_count):
        c = int(labels[u])
        deg_sum[c] = deg_sum.get(c, 0) + int(degrees[u])

    q = 0.0
    for c, k in deg_sum.items():
        q += intra.get(c, 0) / m - (k / (2.0 * m)) ** 2
    return q


# ---------------------------------------------------------------------------
# Louvain
# ---------------------------------------------------------------------------

def _local_move(adj, strength, rng, max_sweeps=100):
    """One level of local moving on a weighted graph.

    adj: per-node dict {neighbor: weight} excluding self-loops.
    strength: per-node total weight k_i (self-loops already counted twice).
    Returns (labels, moved_any).
    """
    n = len(adj)
    m2 = float(np.sum(strength))
    labels = list(range(n))
    sigma_tot = [float(k) for k in strength]
    moved_any = False

    for _ in range(max_sweeps):
        moved = False
        for i in rng.permutation(n):
            i = int(i)
            a = labels[i]
            k_i = float(strength[i])
            sigma_tot[a] -= k_i

            weights_to = {}
            for j, w in adj[i].items():
                c = labels[j]
                weights_to[c] = weights_to.get(c, 0.0) + w

            # Gain of joining community c, up to terms identical for all
            # destinations: k_{i,c} - k_i * sigma_tot[c] / m2.
            best_c, best_gain = a, weights_to.get(a, 0.0) - k_i * sigma_tot[a] / m2
            for c in sorted(weights_to):
                gain = weights_to[c] - k_i * sigma_tot[c] / m2
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain

            labels[i] = best_c
            sigma_tot[best_c] += k_i
            if best_c != a:
                moved = True
                moved_any = True
        if not moved:
            break
    return labels, moved_any


def _aggregate(adj, strength, labels):
    """Collapse communities into nodes, keeping weights and self-loops."""
    comms = sorted(set(labels))
    remap = {c: i for i, c in enumerate(comms)}
    new_n = len(comms)
    new_adj = [dict() for _ in range(new_n)]
    new_strength = np.zeros(new_n)

    for i, row in enumerate(adj):
        a = remap[labels[i]]
        new_strength[a] += strength[i]
        for j, w in row.items():
            b = remap[labels[j]]
            if a != b:
                new_adj[a][b] = new_adj[a].get(b, 0.0) + w
            # intra weight lives inside strength already
    return new_adj, new_strength, remap


def louvain(graph, rng):
    """Louvain community detection: local moving plus graph aggregation.

    The node sweep order is drawn from rng, so a fixed seed fixes the
    result. Each pass never decreases modularity.
    """
    n = graph.node_count
    if n == 0:
        return np.empty(0, dtype=np.int64)

    adj = [dict() for _ in range(n)]
    for u, v in graph.edges:
        u, v = int(u), int(v)
        adj[u][v] = adj[u].get(v, 0.0) + 1.0
        adj[v][u] = adj[v].get(u, 0.0) + 1.0
    strength = graph.degrees().astype(float)

    if graph.edge_count == 0:
        return np.arange(n, dtype=np.int64)

    membership = np.arange(n, dtype=np.int64)
    while True:
        labels, moved = _local_move(adj, strength, rng)
        if not moved:
            break
        adj, strength, remap = _aggregate(adj, strength, labels)
        membership = np.array([remap[labels[c]] for c in membership], dtype=np.int64)
        if len(adj) == n:
            break
        n = len(adj)
    return canonicalize_labels(membership)


# ---------------------------------------------------------------------------
# Label propagation
# ---------------------------------------------------------------------------

LABELPROP_SWEEP_CAP = 100


def label_propagation(graph, rng):
    """Asynchronous majority label propagation.

    Nodes adopt the most frequent label among their neighbors, sweeping in
    a fresh seeded order each round; a node already holding one of the top
    labels keeps it. Stops when a sweep changes nothing or at the sweep
    cap.
    """
    n = graph.node_count
    adj = [[] for _ in range(n)]
    for u, v in graph.edges:
        adj[int(u)].append(int(v))
        adj[int(v)].append(int(u))

    labels = list(range(n))
    for _ in range(LABELPROP_SWEEP_CAP):
        changed = False
        for u in rng.permutation(n):
            u = int(u)
            neigh = adj[u]
            if not neigh:
                continue
            counts = {}
            for v in neigh:
                lab = labels[v]
                counts[lab] = counts.get(lab, 0) + 1
            top = max(counts.values())
            best = [lab for lab, c in counts.items() if c == top]
            if labels[u] in best:
                continue
            labels[u] = best[int(rng.integers(len(best)))] if len(best) > 1 else best[0]
            changed = True
        if not changed:
            break
    return canonicalize_labels(np.array(labels, dtype=np.int64))


# ---------------------------------------------------------------------------
# Greedy modularity (agglomerative)
# ---------------------------------------------------------------------------

def greedy_modularity(graph):
    """Merge the community pair with the largest modularity gain until
    no merge helps. Deterministic: gain ties resolve to the smallest
    (label, label) pair, and merges keep the smaller label.
    """
    n = graph.node_count
    m = graph.edge_count
    if m == 0:
        return np.arange(n, dtype=np.int64)

    labels = np.arange(n, dtype=np.int64)
    deg = {i: int(d) for i, d in enumerate(graph.degrees())}
    between = {}
    for u, v in graph.edges:
        between[(int(u), int(v))] = between.get((int(u), int(v)), 0) + 1

    members = {i: [i] for i in range(n)}

    while between:
        best_pair, best_gain = None, 0.0
        for (a, b), e_ab in between.items():
            gain = e_ab / m - deg[a] * deg[b] / (2.0 * m * m)
            if gain <= 1e-12:
                continue
            if (best_pair is None or gain > best_gain + 1e-12
                    or (abs(gain - best_gain) <= 1e-12 and (a, b) < best_pair)):
                best_pair, best_gain = (a, b), gain
        if best_pair is None:
            break

        a, b = best_pair
        members[a].extend(members.pop(b))
        deg[a] += deg.pop(b)
        between.pop((a, b))
        # reroute b's remaining connections to a
        for pair in list(between):
            if b in pair:
                other = pair[0] if pair[1] == b else pair[1]
                w = between.pop(pair)
                if other == a:
                    continue
                key = (a, other) if a < other else (other, a)
                between[key] = between.get(key, 0) + w

    for root, nodes in members.items():
        for u in nodes:
            labels[u] = root
    return canonicalize_labels(labels)


# ---------------------------------------------------------------------------
# Partition comparison
# ---------------------------------------------------------------------------

def contingency(labels_a, labels_b):
    """Contingency counts n_ij plus the row/column sums."""
    cells = {}
    for la, lb in zip(labels_a, labels_b):
        key = (int(la), int(lb))
        cells[key] = cells.get(key, 0) + 1
    rows = {}
    cols = {}
    for (la, lb), c in cells.items():
        rows[la] = rows.get(la, 0) + c
        cols[lb] = cols.get(lb, 0) + c
    return cells, rows, cols


def ari(labels_a, labels_b):
    """Adjusted Rand Index between two partitions of the same node set.

    Computed exactly from the contingency table with rational arithmetic;
    returns 0.0 when the adjustment denominator vanishes (both partitions
    carry no pair information).
    """
    if len(labels_a) != len(labels_b):
        raise ValueError("partitions cover different node sets")
    n = len(labels_a)
    cells, rows, cols = contingency(labels_a, labels_b)

    sum_cells = sum(comb(c, 2) for c in cells.values())
    sum_rows = sum(comb(c, 2) for c in rows.values())
    sum_cols = sum(comb(c, 2) for c in cols.values())
    pairs = comb(n, 2)
    if pairs == 0:
        return 0.0

    expected = Fraction(sum_rows * sum_cols, pairs)
    denom = Fraction(sum_rows + sum_cols, 2) - expected
    if denom == 0:
        return 0.0
    return float((sum_cells - expected) / denom)


def timed(run):
    """Run a detection invocation and return (partition, seconds).

    Measures only the call itself on the monotonic clock.
    """
    start = time.perf_counter()
    result = run()
    elapsed = time.perf_counter() - start
    return result, elapsed
