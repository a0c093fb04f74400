import numpy as np
import pytest

from walksparse.gan import (DiscriminatorParams, GeneratorParams, RMSProp,
                            TrainingConfig, TrainingDiverged, WalkBatch,
                            critic_gradient, critic_objective, critic_score,
                            critic_scores, critic_update, generate_walk,
                            generate_walks, generator_gradient,
                            generator_objective, init_discriminator,
                            init_generator, load_model, sample_model_walks,
                            save_model, step_distribution, train, zero_grads)
from walksparse.graph import Graph
from walksparse.scoring import RewardKind
from walksparse.walks import sample_corpus


def tiny_models(n_nodes=6, hidden=4, embed=4, latent=3, seed=0):
    rng = np.random.default_rng(seed)
    gp = init_generator(n_nodes, rng, hidden_dim=hidden, embed_dim=embed,
                        latent_dim=latent)
    dp = init_discriminator(n_nodes, rng, hidden_dim=hidden, embed_dim=embed)
    return gp, dp


def finite_difference(objective, arr, eps=1e-5):
    grad = np.zeros_like(arr)
    it = np.nditer(arr, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        orig = arr[idx]
        arr[idx] = orig + eps
        plus = objective()
        arr[idx] = orig - eps
        minus = objective()
        arr[idx] = orig
        grad[idx] = (plus - minus) / (2 * eps)
        it.iternext()
    return grad


def max_relative_error(analytic, numeric):
    scale = max(float(np.abs(numeric).max()), 1e-8)
    return float(np.abs(analytic - numeric).max()) / scale


class TestGenerateWalk:
    def test_argmax_mode_deterministic(self):
        gp, _ = tiny_models()
        z = np.random.default_rng(1).standard_normal(3)
        w1, lp1 = generate_walk(gp, z, 5, mode="argmax")
        w2, lp2 = generate_walk(gp, z, 5, mode="argmax")
        assert np.array_equal(w1, w2)
        assert np.array_equal(lp1, lp2)

    def test_zero_output_projection_gives_uniform(self):
        gp, _ = tiny_models()
        gp.out_w[:] = 0.0
        gp.out_b[:] = 0.0
        z = np.zeros((2, gp.latent_dim))
        dists = step_distribution(gp, z, 4)
        for probs in dists:
            assert np.allclose(probs, 1.0 / gp.node_count)

    def test_step_distributions_normalized(self):
        gp, _ = tiny_models(seed=3)
        z = np.random.default_rng(2).standard_normal((8, gp.latent_dim))
        for probs in step_distribution(gp, z, 6):
            assert np.abs(probs.sum(axis=1) - 1.0).max() < 1e-9

    def test_sample_mode_matches_first_step_distribution(self):
        gp, _ = tiny_models(seed=4)
        z = np.zeros(gp.latent_dim)
        p1 = step_distribution(gp, z[None, :], 2)[0][0]
        n = 10_000
        rng = np.random.default_rng(5)
        counts = np.zeros(gp.node_count)
        walks, _ = generate_walks(gp, np.tile(z, (n, 1)), 2, mode="sample", rng=rng)
        for node in walks[:, 0]:
            counts[node] += 1
        for j in range(gp.node_count):
            sigma = np.sqrt(n * p1[j] * (1 - p1[j]))
            assert abs(counts[j] - n * p1[j]) <= 3 * sigma + 1e-9

    def test_walk_length_and_ids_in_range(self):
        gp, _ = tiny_models()
        rng = np.random.default_rng(6)
        walks, logps = generate_walks(gp, rng.standard_normal((10, gp.latent_dim)),
                                      7, mode="sample", rng=rng)
        assert walks.shape == (10, 7)
        assert logps.shape == (10, 7)
        assert walks.min() >= 0 and walks.max() < gp.node_count

    def test_non_finite_activation_aborts(self):
        gp, _ = tiny_models()
        gp.out_w[0, 0] = np.inf
        with pytest.raises(TrainingDiverged):
            generate_walks(gp, np.zeros((1, gp.latent_dim)), 3,
                           mode="sample", rng=np.random.default_rng(0))


class TestCriticScore:
    def test_zero_params_score_zero(self):
        _, dp = tiny_models()
        for _, arr in dp.blocks():
            arr[:] = 0.0
        assert critic_score(dp, np.array([0, 1, 2])) == 0.0

    def test_deterministic(self):
        _, dp = tiny_models(seed=7)
        w = np.array([0, 1, 2, 3])
        assert critic_score(dp, w) == critic_score(dp, w)

    def test_sensitive_to_any_node_change(self):
        _, dp = tiny_models(seed=8)
        rng = np.random.default_rng(9)
        hits = 0
        for _ in range(100):
            w = rng.integers(0, dp.node_count, size=5)
            pos = int(rng.integers(5))
            w2 = w.copy()
            w2[pos] = (w2[pos] + 1 + int(rng.integers(dp.node_count - 1))) % dp.node_count
            if critic_score(dp, w) != critic_score(dp, w2):
                hits += 1
        assert hits == 100

    def test_out_of_range_node_rejected(self):
        _, dp = tiny_models()
        with pytest.raises(ValueError):
            critic_score(dp, np.array([0, dp.node_count]))


def make_batch(gp, dp, m=2, steps=3, seed=0, rewards=None):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((m, gp.latent_dim))
    walks, logps = generate_walks(gp, z, steps, mode="sample", rng=rng)
    if rewards is None:
        rewards = rng.random(m) + 0.5
    return WalkBatch(z, walks, logps, np.asarray(rewards, dtype=float))


class TestGeneratorGradient:
    def test_zero_weights_give_zero_gradient(self):
        gp, dp = tiny_models()
        for _, arr in dp.blocks():
            arr[:] = 0.0  # critic scores 0 -> weights 0
        batch = make_batch(gp, dp, rewards=[0.0, 0.0])
        grads = generator_gradient(gp, dp, batch)
        for name, g in grads.items():
            assert np.all(g == 0.0), name

    def test_linearity_in_reward(self):
        gp, dp = tiny_models(seed=1)
        base = make_batch(gp, dp, seed=2)
        double = WalkBatch(base.z, base.walks, base.logps, 2.0 * base.rewards)
        g1 = generator_gradient(gp, dp, base)
        g2 = generator_gradient(gp, dp, double)
        for name in g1:
            assert np.allclose(2.0 * g1[name], g2[name])

    def test_matches_finite_differences(self):
        gp, dp = tiny_models(seed=2)
        batch = make_batch(gp, dp, m=2, steps=3, seed=3)
        grads = generator_gradient(gp, dp, batch)
        for name, arr in gp.blocks():
            numeric = finite_difference(lambda: generator_objective(gp, dp, batch), arr)
            assert max_relative_error(grads[name], numeric) < 1e-4, name

    def test_baseline_subtraction_changes_weights_only(self):
        gp, dp = tiny_models(seed=3)
        batch = make_batch(gp, dp, m=4, seed=4)
        g_raw = generator_gradient(gp, dp, batch)
        g_base = generator_gradient(gp, dp, batch, subtract_baseline=True)
        assert any(not np.allclose(g_raw[n], g_base[n]) for n in g_raw)


class TestCriticGradient:
    def test_matches_finite_differences(self):
        gp, dp = tiny_models(seed=4)
        rng = np.random.default_rng(5)
        real = rng.integers(0, dp.node_count, size=(2, 3))
        fake = rng.integers(0, dp.node_count, size=(2, 3))
        m = real.shape[0]
        g_real, _ = critic_gradient(dp, real, np.full(m, 1.0 / m))
        g_fake, _ = critic_gradient(dp, fake, np.full(m, -1.0 / m))
        for name, arr in dp.blocks():
            numeric = finite_difference(lambda: critic_objective(dp, real, fake), arr)
            assert max_relative_error(g_real[name] + g_fake[name], numeric) < 1e-4, name


class TestCriticUpdate:
    def test_clip_bound_holds_exactly(self):
        gp, dp = tiny_models(seed=5)
        rng = np.random.default_rng(6)
        real = rng.integers(0, dp.node_count, size=(4, 3))
        fake = rng.integers(0, dp.node_count, size=(4, 3))
        critic_update(dp, real, fake, 0.1, 0.01)
        for name, arr in dp.blocks():
            assert np.abs(arr).max() <= 0.01, name

    def test_identical_batches_have_zero_objective(self):
        gp, dp = tiny_models(seed=6)
        rng = np.random.default_rng(7)
        batch = rng.integers(0, dp.node_count, size=(3, 4))
        assert critic_objective(dp, batch, batch.copy()) == 0.0

    def test_separates_clique_walks_from_noise(self):
        # real walks live inside a 6-clique over nodes 0..5 of a 12-node
        # graph; fakes are uniform random sequences over all 12 nodes.
        clique = Graph(12, [(i, j) for i in range(6) for j in range(i + 1, 6)])
        gaps = []
        for seed in range(5):
            rng = np.random.default_rng(seed)
            corpus = sample_corpus(clique, 400, 6, seed=seed)
            dp = init_discriminator(12, rng, hidden_dim=8, embed_dim=8)
            opt = RMSProp()
            for _ in range(200):
                real = corpus.walks[rng.integers(corpus.count, size=16)]
                fake = rng.integers(0, 12, size=(16, 6))
                critic_update(dp, real, fake, 5e-4, 0.01, opt=opt)
            real = corpus.walks[rng.integers(corpus.count, size=200)]
            fake = rng.integers(0, 12, size=(200, 6))
            gaps.append(critic_scores(dp, real).mean()
                        - critic_scores(dp, fake).mean())
        assert float(np.median(gaps)) > 0.0


class TestTrain:
    def graph(self):
        return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])

    def test_zero_iterations_returns_initial_params(self):
        g = self.graph()
        corpus = sample_corpus(g, 20, 6, seed=0)
        cfg = TrainingConfig(iterations=0, batch_size=4, walk_length=6, seed=1,
                             hidden_dim=8, embed_dim=8, latent_dim=4)
        gp, stats = train(g, corpus, cfg)
        rng = np.random.default_rng(1)
        fresh = init_generator(5, rng, 8, 8, 4)
        for (n1, a1), (n2, a2) in zip(gp.blocks(), fresh.blocks()):
            assert n1 == n2 and np.array_equal(a1, a2)
        assert len(stats) == 0

    def test_same_seed_bitwise_identical_stats(self):
        g = self.graph()
        corpus = sample_corpus(g, 30, 6, seed=2)
        cfg = TrainingConfig(iterations=8, batch_size=8, walk_length=6, seed=3,
                             hidden_dim=8, embed_dim=8, latent_dim=4)
        _, s1 = train(g, corpus, cfg)
        _, s2 = train(g, corpus, cfg)
        assert s1.loss_generator == s2.loss_generator
        assert s1.loss_critic == s2.loss_critic
        assert s1.mean_reward == s2.mean_reward
        assert s1.mean_critic_real == s2.mean_critic_real
        assert s1.mean_critic_fake == s2.mean_critic_fake

    def test_losses_finite_and_recorded(self):
        g = self.graph()
        corpus = sample_corpus(g, 30, 6, seed=4)
        cfg = TrainingConfig(iterations=5, batch_size=8, walk_length=6, seed=5,
                             hidden_dim=8, embed_dim=8, latent_dim=4,
                             reward=RewardKind.JACCARD)
        _, stats = train(g, corpus, cfg)
        assert len(stats) == 5
        for series in (stats.loss_generator, stats.loss_critic,
                       stats.mean_reward):
            assert np.isfinite(series).all()

    def test_fingerprint_mismatch_rejected(self):
        g = self.graph()
        other = Graph(5, [(0, 1)])
        corpus = sample_corpus(other, 10, 6, seed=6)
        cfg = TrainingConfig(iterations=1, batch_size=4, walk_length=6)
        with pytest.raises(ValueError, match="fingerprint"):
            train(g, corpus, cfg)

    def test_gate_off_means_unit_rewards(self):
        g = self.graph()
        corpus = sample_corpus(g, 30, 6, seed=7)
        cfg = TrainingConfig(iterations=3, batch_size=8, walk_length=6, seed=8,
                             hidden_dim=8, embed_dim=8, latent_dim=4,
                             reward=RewardKind.UNIT, gate="off")
        _, stats = train(g, corpus, cfg)
        assert stats.mean_reward == [1.0, 1.0, 1.0]


class TestCheckpoint:
    def test_round_trip_and_byte_determinism(self, tmp_path):
        gp, _ = tiny_models(seed=9)
        cfg = TrainingConfig(iterations=3, reward=RewardKind.JACCARD)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_model(p1, gp, cfg)
        save_model(p2, gp, cfg)
        assert p1.read_bytes() == p2.read_bytes()

        gp2, cfg2 = load_model(p1)
        assert cfg2 == cfg
        for (n1, a1), (n2, a2) in zip(gp.blocks(), gp2.blocks()):
            assert n1 == n2 and np.array_equal(a1, a2)

    def test_loaded_model_generates_identically(self, tmp_path):
        gp, _ = tiny_models(seed=10)
        cfg = TrainingConfig()
        save_model(tmp_path / "m.json", gp, cfg)
        gp2, _ = load_model(tmp_path / "m.json")
        z = np.random.default_rng(11).standard_normal((4, gp.latent_dim))
        w1, _ = generate_walks(gp, z, 5, mode="argmax")
        w2, _ = generate_walks(gp2, z, 5, mode="argmax")
        assert np.array_equal(w1, w2)


class TestSampleModelWalks:
    def test_count_and_shape(self):
        gp, _ = tiny_models(seed=12)
        walks = sample_model_walks(gp, 300, 5, np.random.default_rng(0), batch=128)
        assert walks.shape == (300, 5)
