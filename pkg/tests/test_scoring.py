import numpy as np
import pytest

from walksparse.graph import Graph
from walksparse.scoring import (EdgeScorer, RewardKind, density_jaccard,
                                f_score, jaccard, walk_reward)

from conftest import random_graph


# --- independent set-arithmetic oracles -------------------------------------

def jaccard_oracle(g, u, v):
    nu = set(int(x) for x in g.neighbors(u))
    nv = set(int(x) for x in g.neighbors(v))
    union = nu | nv
    if not union:
        return 0.0
    return len(nu & nv) / len(union)


def density_jaccard_oracle(g, u, v):
    j = jaccard_oracle(g, u, v)
    if j == 0.0:
        return 0.0
    nu = set(int(x) for x in g.neighbors(u))
    nv = set(int(x) for x in g.neighbors(v))
    union = sorted(nu | nv)
    k = len(union)
    edges = sum(1 for i, a in enumerate(union) for b in union[i + 1:]
                if g.has_edge(a, b))
    if k <= 1:
        d = 1.0
    else:
        d = 2.0 * edges / (k * (k - 1))
        if d == 0.0:
            d = 2.0 / (k * (k - 1))
    return j / d


def k4():
    return Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


class TestJaccard:
    def test_triangle_edge(self, triangle):
        assert jaccard(triangle, 0, 1) == pytest.approx(1 / 3)

    def test_path_adjacent_pair_scores_zero(self, path3):
        assert jaccard(path3, 0, 1) == 0.0

    def test_star_leaves_outscore_real_edges(self, star4):
        # the non-edge (1, 2) scores 1 while every real edge scores 0
        assert jaccard(star4, 1, 2) == 1.0
        assert jaccard(star4, 0, 1) == 0.0

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        g = random_graph(18, 0.25, rng)
        for _ in range(50):
            u, v = rng.choice(18, size=2, replace=False)
            assert jaccard(g, int(u), int(v)) == jaccard(g, int(v), int(u))
            assert (density_jaccard(g, int(u), int(v))
                    == density_jaccard(g, int(v), int(u)))

    def test_same_node_rejected(self, triangle):
        with pytest.raises(ValueError):
            jaccard(triangle, 1, 1)

    def test_out_of_range(self, triangle):
        with pytest.raises(ValueError):
            jaccard(triangle, 0, 5)

    def test_matches_oracle_on_random_graphs(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n = int(rng.integers(2, 20))
            g = random_graph(n, rng.random(), rng)
            for u in range(n):
                for v in range(u + 1, n):
                    assert jaccard(g, u, v) == jaccard_oracle(g, u, v)


class TestDensityJaccard:
    def test_triangle_edge(self, triangle):
        assert density_jaccard(triangle, 0, 1) == pytest.approx(1 / 3)

    def test_k4_edge(self):
        assert density_jaccard(k4(), 0, 1) == pytest.approx(0.5)

    def test_star_leaves_degenerate_density(self, star4):
        assert density_jaccard(star4, 1, 2) == 1.0

    def test_zero_density_floor(self):
        # 4-cycle: N_0 = N_2 = {1, 3}, no edge between 1 and 3, so the
        # union subgraph has density 0 and gets floored at one edge.
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert jaccard(g, 0, 2) == 1.0
        assert density_jaccard(g, 0, 2) == 1.0 / (2.0 / (2 * 1))

    def test_at_least_jaccard_when_positive(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            g = random_graph(15, 0.3, rng)
            for u in range(15):
                for v in range(u + 1, 15):
                    j = jaccard(g, u, v)
                    if j > 0:
                        assert density_jaccard(g, u, v) >= j

    def test_matches_oracle_on_random_graphs(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            n = int(rng.integers(2, 18))
            g = random_graph(n, rng.random(), rng)
            for u in range(n):
                for v in range(u + 1, n):
                    assert density_jaccard(g, u, v) == density_jaccard_oracle(g, u, v)


class TestFScore:
    def test_unit_kind(self, triangle):
        assert f_score(triangle, (0, 1), RewardKind.UNIT) == 1.0

    def test_jaccard_kind(self, triangle):
        assert f_score(triangle, (0, 1), RewardKind.JACCARD) == pytest.approx(1 / 3)

    @pytest.mark.parametrize("kind", list(RewardKind))
    def test_degenerate_pair_scores_zero(self, triangle, kind):
        assert f_score(triangle, (1, 1), kind) == 0.0


class TestWalkReward:
    def test_gated_sum_on_triangle(self, triangle):
        w = np.array([0, 1, 2])
        assert walk_reward(triangle, w, -0.5, RewardKind.JACCARD) == pytest.approx(2 / 3)

    def test_positive_critic_gives_unit(self, triangle):
        w = np.array([0, 1, 2])
        assert walk_reward(triangle, w, 0.2, RewardKind.DENSITY_JACCARD) == 1.0

    def test_unit_kind_counts_edges(self, triangle):
        rng = np.random.default_rng(4)
        w = np.array([int(rng.integers(3)) for _ in range(16)])
        # avoid degenerate repeats for the exact count
        w = np.array([0, 1] * 8)
        assert walk_reward(triangle, w, -1.0, RewardKind.UNIT) == 15.0

    def test_never_negative(self):
        rng = np.random.default_rng(5)
        g = random_graph(12, 0.3, rng)
        for _ in range(50):
            w = rng.integers(12, size=8)
            score = float(rng.normal())
            for kind in RewardKind:
                assert walk_reward(g, w, score, kind) >= 0.0


class TestEdgeScorer:
    def test_cache_matches_direct(self):
        rng = np.random.default_rng(6)
        g = random_graph(14, 0.3, rng)
        scorer = EdgeScorer(g, RewardKind.DENSITY_JACCARD)
        for _ in range(100):
            u, v = rng.choice(14, size=2, replace=False)
            assert scorer.score((int(u), int(v))) == density_jaccard(g, int(u), int(v))

    def test_walk_sum_matches_walk_reward(self, triangle):
        scorer = EdgeScorer(triangle, RewardKind.JACCARD)
        w = np.array([0, 1, 2, 0])
        assert (walk_reward(triangle, w, -1.0, RewardKind.JACCARD)
                == scorer.walk_score_sum(w))
