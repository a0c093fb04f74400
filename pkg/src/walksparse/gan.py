"""LSTM walk generator and critic, trained as a clipped-weight
adversarial pair with a reward-weighted policy gradient.

Everything is plain numpy. Walks are discrete, so the generator trains on
sampled node choices with a score-function (REINFORCE) estimator: the
gradient of each walk's log-likelihood is weighted by the critic's score
times the walk's edge-importance reward. The critic is a standard clipped
critic scoring sequences with an unbounded real.

All gradients are exact BPTT and are verified against central finite
differences in the test suite.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .scoring import RewardKind, EdgeScorer


class TrainingDiverged(RuntimeError):
    """Non-finite loss or activation; carries the stats gathered so far."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


def _sigmoid(x):
    # tanh form: one ufunc, no exp overflow anywhere on the real line
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------

@dataclass
class LSTMCellParams:
    """Per-gate weights/biases, each mapping (input + hidden) -> hidden."""

    w_i: np.ndarray
    b_i: np.ndarray
    w_f: np.ndarray
    b_f: np.ndarray
    w_o: np.ndarray
    b_o: np.ndarray
    w_c: np.ndarray
    b_c: np.ndarray

    def blocks(self, prefix=""):
        for name in ("w_i", "b_i", "w_f", "b_f", "w_o", "b_o", "w_c", "b_c"):
            yield prefix + name, getattr(self, name)


@dataclass
class GeneratorParams:
    """Embedding + init projection + LSTM cell + per-node output logits.

    The embedding has node_count + 1 rows; the extra last row is the
    start-of-walk token, so step 1 runs the same machinery as every later
    step.
    """

    node_count: int
    embed: np.ndarray     # (N + 1, e)
    init_w: np.ndarray    # (latent, 2d) -> concat(c0, h0)
    init_b: np.ndarray    # (2d,)
    cell: LSTMCellParams  # gates over (e + d) -> d
    out_w: np.ndarray     # (d, N)
    out_b: np.ndarray     # (N,)

    @property
    def hidden_dim(self):
        return self.out_w.shape[0]

    @property
    def latent_dim(self):
        return self.init_w.shape[0]

    @property
    def start_token(self):
        return self.node_count

    def blocks(self):
        yield "embed", self.embed
        yield "init_w", self.init_w
        yield "init_b", self.init_b
        yield from self.cell.blocks("cell.")
        yield "out_w", self.out_w
        yield "out_b", self.out_b


@dataclass
class DiscriminatorParams:
    """Embedding + LSTM cell + scalar projection (no squashing)."""

    node_count: int
    embed: np.ndarray   # (N, e)
    cell: LSTMCellParams
    out_w: np.ndarray   # (d,)
    out_b: np.ndarray   # (1,)

    @property
    def hidden_dim(self):
        return len(self.out_w)

    def blocks(self):
        yield "embed", self.embed
        yield from self.cell.blocks("cell.")
        yield "out_w", self.out_w
        yield "out_b", self.out_b


def _init_cell(in_dim, hidden_dim, rng):
    def mat():
        return rng.normal(0.0, 1.0 / np.sqrt(in_dim + hidden_dim),
                          size=(in_dim + hidden_dim, hidden_dim))
    zeros = lambda: np.zeros(hidden_dim)
    # forget bias starts open so early gradients reach back in time
    return LSTMCellParams(w_i=mat(), b_i=zeros(), w_f=mat(), b_f=np.ones(hidden_dim),
                          w_o=mat(), b_o=zeros(), w_c=mat(), b_c=zeros())


def init_generator(node_count, rng, hidden_dim=32, embed_dim=32, latent_dim=16):
    return GeneratorParams(
        node_count=node_count,
        embed=rng.normal(0.0, 1.0 / np.sqrt(embed_dim), size=(node_count + 1, embed_dim)),
        init_w=rng.normal(0.0, 1.0 / np.sqrt(latent_dim), size=(latent_dim, 2 * hidden_dim)),
        init_b=np.zeros(2 * hidden_dim),
        cell=_init_cell(embed_dim, hidden_dim, rng),
        out_w=rng.normal(0.0, 1.0 / np.sqrt(hidden_dim), size=(hidden_dim, node_count)),
        out_b=np.zeros(node_count),
    )


def init_discriminator(node_count, rng, hidden_dim=32, embed_dim=32):
    return DiscriminatorParams(
        node_count=node_count,
        embed=rng.normal(0.0, 1.0 / np.sqrt(embed_dim), size=(node_count, embed_dim)),
        cell=_init_cell(embed_dim, hidden_dim, rng),
        out_w=rng.normal(0.0, 1.0 / np.sqrt(hidden_dim), size=hidden_dim),
        out_b=np.zeros(1),
    )


def zero_grads(params):
    return {name: np.zeros_like(arr) for name, arr in params.blocks()}


# ---------------------------------------------------------------------------
# LSTM cell
# ---------------------------------------------------------------------------
# The four gate projections are packed into one (in+hidden, 4*hidden)
# matmul per step; the packed matrix is built once per unrolled pass from
# the per-gate parameter blocks.

def pack_cell(cell):
    w = np.concatenate([cell.w_i, cell.w_f, cell.w_o, cell.w_c], axis=1)
    b = np.concatenate([cell.b_i, cell.b_f, cell.b_o, cell.b_c])
    return w, b


def lstm_step(cell, x, c_prev, h_prev, packed=None):
    if packed is None:
        packed = pack_cell(cell)
    w, b = packed
    d = c_prev.shape[1]
    xh = np.concatenate([x, h_prev], axis=1)
    acts = xh @ w + b
    gates = _sigmoid(acts[:, :3 * d])
    zi = gates[:, :d]
    zf = gates[:, d:2 * d]
    zo = gates[:, 2 * d:]
    zc = np.tanh(acts[:, 3 * d:])
    c = zf * c_prev + zi * zc
    tc = np.tanh(c)
    h = zo * tc
    return c, h, (xh, zi, zf, zo, zc, c_prev, tc)


def lstm_step_backward(cell, cache, dc_in, dh_in, grads, prefix, x_dim,
                       packed=None):
    if packed is None:
        packed = pack_cell(cell)
    w, _ = packed
    xh, zi, zf, zo, zc, c_prev, tc = cache
    dzo = dh_in * tc
    dc = dc_in + dh_in * zo * (1.0 - tc * tc)
    dzf = dc * c_prev
    dzi = dc * zc
    dzc = dc * zi
    dc_prev = dc * zf

    dacts = np.concatenate([
        dzi * zi * (1.0 - zi),
        dzf * zf * (1.0 - zf),
        dzo * zo * (1.0 - zo),
        dzc * (1.0 - zc * zc),
    ], axis=1)

    d = c_prev.shape[1]
    dw = xh.T @ dacts
    db = dacts.sum(axis=0)
    grads[prefix + "w_i"] += dw[:, :d]
    grads[prefix + "b_i"] += db[:d]
    grads[prefix + "w_f"] += dw[:, d:2 * d]
    grads[prefix + "b_f"] += db[d:2 * d]
    grads[prefix + "w_o"] += dw[:, 2 * d:3 * d]
    grads[prefix + "b_o"] += db[2 * d:3 * d]
    grads[prefix + "w_c"] += dw[:, 3 * d:]
    grads[prefix + "b_c"] += db[3 * d:]

    dxh = dacts @ w.T
    return dxh[:, :x_dim], dc_prev, dxh[:, x_dim:]


# ---------------------------------------------------------------------------
# Generator forward / sampling
# ---------------------------------------------------------------------------

def _generator_forward(gp, z, walk_length=None, nodes=None, mode="sample",
                       rng=None, keep_caches=False):
    """Unrolled forward pass.

    With `nodes` given the pass is teacher-forced along those walks;
    otherwise nodes are chosen per `mode` ("sample" draws from the step
    distribution, "argmax" takes its maximum).
    """
    m = z.shape[0]
    d = gp.hidden_dim
    if nodes is not None:
        walk_length = nodes.shape[1]
    if walk_length is None or walk_length < 2:
        raise ValueError("walk_length must be >= 2")
    if mode == "sample" and nodes is None and rng is None:
        raise ValueError("sample mode requires rng")

    init = z @ gp.init_w + gp.init_b
    c, h = init[:, :d].copy(), init[:, d:].copy()
    prev = np.full(m, gp.start_token, dtype=np.int64)

    walks = np.empty((m, walk_length), dtype=np.int64)
    logps = np.empty((m, walk_length))
    caches = [] if keep_caches else None
    packed = pack_cell(gp.cell)

    rows = np.arange(m)
    for t in range(walk_length):
        x = gp.embed[prev]
        c, h, cache = lstm_step(gp.cell, x, c, h, packed=packed)
        logits = h @ gp.out_w + gp.out_b
        if not np.isfinite(logits).all():
            raise TrainingDiverged(f"non-finite generator activation at step {t}")
        logp = _log_softmax(logits)
        probs = np.exp(logp)

        if nodes is not None:
            chosen = nodes[:, t]
        elif mode == "argmax":
            chosen = logits.argmax(axis=1)
        else:
            cum = probs.cumsum(axis=1)
            cum[:, -1] = 1.0
            chosen = (rng.random(m)[:, None] < cum).argmax(axis=1)

        walks[:, t] = chosen
        logps[:, t] = logp[rows, chosen]
        if keep_caches:
            caches.append((prev, cache, probs, chosen, h))
        prev = np.asarray(chosen, dtype=np.int64)

    return walks, logps, caches


def generate_walks(gp, z, walk_length, mode="sample", rng=None):
    """Generate a batch of walks; returns (walks, per-step log-probs)."""
    walks, logps, _ = _generator_forward(gp, z, walk_length=walk_length,
                                         mode=mode, rng=rng)
    return walks, logps


def generate_walk(gp, z_latent, walk_length, mode="sample", rng=None):
    """Single-walk convenience wrapper around generate_walks."""
    walks, logps = generate_walks(gp, z_latent[None, :], walk_length,
                                  mode=mode, rng=rng)
    return walks[0], logps[0]


def step_distribution(gp, z, walk_length):
    """Per-step probability vectors along the argmax walk (diagnostics)."""
    m = z.shape[0]
    d = gp.hidden_dim
    init = z @ gp.init_w + gp.init_b
    c, h = init[:, :d].copy(), init[:, d:].copy()
    prev = np.full(m, gp.start_token, dtype=np.int64)
    dists = []
    packed = pack_cell(gp.cell)
    for _ in range(walk_length):
        x = gp.embed[prev]
        c, h, _ = lstm_step(gp.cell, x, c, h, packed=packed)
        logits = h @ gp.out_w + gp.out_b
        probs = np.exp(_log_softmax(logits))
        dists.append(probs)
        prev = probs.argmax(axis=1).astype(np.int64)
    return dists


def sample_model_walks(gp, count, walk_length, rng, mode="sample", batch=256):
    """Draw `count` walks from the trained generator in batches."""
    outs = []
    remaining = count
    while remaining > 0:
        m = min(batch, remaining)
        z = rng.standard_normal((m, gp.latent_dim))
        walks, _ = generate_walks(gp, z, walk_length, mode=mode, rng=rng)
        outs.append(walks)
        remaining -= m
    return np.concatenate(outs, axis=0)


# ---------------------------------------------------------------------------
# Critic
# ---------------------------------------------------------------------------

def _critic_forward(dp, walks, keep_caches=False):
    m, steps = walks.shape
    d = dp.hidden_dim
    c = np.zeros((m, d))
    h = np.zeros((m, d))
    caches = [] if keep_caches else None
    packed = pack_cell(dp.cell)
    for t in range(steps):
        x = dp.embed[walks[:, t]]
        c, h, cache = lstm_step(dp.cell, x, c, h, packed=packed)
        if keep_caches:
            caches.append(cache)
    scores = h @ dp.out_w + dp.out_b[0]
    if not np.isfinite(scores).all():
        raise TrainingDiverged("non-finite critic score")
    return scores, h, caches


def critic_scores(dp, walks):
    """Critic score of each walk in the batch (unbounded reals)."""
    if walks.max() >= dp.node_count or walks.min() < 0:
        raise ValueError("walk contains node ids outside the critic's range")
    scores, _, _ = _critic_forward(dp, walks)
    return scores


def critic_score(dp, walk):
    return float(critic_scores(dp, np.asarray(walk, dtype=np.int64)[None, :])[0])


def critic_gradient(dp, walks, weights):
    """Gradient of J = sum_i weights_i * D(walk_i) with respect to dp."""
    scores, h_final, caches = _critic_forward(dp, walks, keep_caches=True)
    m, steps = walks.shape
    e = dp.embed.shape[1]
    grads = zero_grads(dp)

    weights = np.asarray(weights, dtype=float)
    grads["out_w"] += h_final.T @ weights
    grads["out_b"] += np.array([weights.sum()])

    dc = np.zeros_like(h_final)
    dh = weights[:, None] * dp.out_w[None, :]
    packed = pack_cell(dp.cell)
    for t in reversed(range(steps)):
        dx, dc, dh = lstm_step_backward(dp.cell, caches[t], dc, dh, grads,
                                        "cell.", e, packed=packed)
        np.add.at(grads["embed"], walks[:, t], dx)
    return grads, scores


def critic_objective(dp, real, fake):
    """(1/m) sum D(real) - (1/m) sum D(fake): the critic maximizes this."""
    return float(critic_scores(dp, real).mean() - critic_scores(dp, fake).mean())


def critic_update(dp, real, fake, learning_rate, clip, opt=None):
    """One ascent step on the critic objective, then weight clipping.

    With `opt` (an RMSProp instance) the raw gradient is rescaled by its
    running second moment; without it the step is plain gradient ascent.
    Every parameter is clamped to [-clip, clip] afterwards.
    """
    if real.shape != fake.shape:
        raise ValueError("real and generated batches must have equal shape")
    m = real.shape[0]
    grads_real, _ = critic_gradient(dp, real, np.full(m, 1.0 / m))
    grads_fake, _ = critic_gradient(dp, fake, np.full(m, -1.0 / m))

    for name, arr in dp.blocks():
        grad = grads_real[name] + grads_fake[name]
        if not np.isfinite(grad).all():
            raise TrainingDiverged("non-finite critic update")
        step = opt.scale("critic." + name, grad) if opt is not None else grad
        arr += learning_rate * step
        np.clip(arr, -clip, clip, out=arr)
    return dp


# ---------------------------------------------------------------------------
# Generator policy gradient
# ---------------------------------------------------------------------------

@dataclass
class WalkBatch:
    """A generated batch: latents, walks, sample-time log-probs, rewards."""

    z: np.ndarray
    walks: np.ndarray
    logps: np.ndarray
    rewards: np.ndarray


def generator_objective(gp, dp, batch):
    """Surrogate loss whose gradient is the policy gradient.

    J = -(1/m) sum_i [D(w_i) * reward_i] * sum_t log p(w_it); the critic
    scores and rewards are constants with respect to the generator.
    """
    weights = critic_scores(dp, batch.walks) * batch.rewards
    _, logps, _ = _generator_forward(gp, batch.z, nodes=batch.walks)
    return float(-(weights * logps.sum(axis=1)).mean())


def generator_gradient(gp, dp, batch, subtract_baseline=False):
    """Exact gradient of generator_objective via BPTT.

    Teacher-forces the generator along the sampled walks; at every step
    the chosen node's log-probability receives the per-walk weight
    D(walk) * reward, and the recurrence carries the rest.
    """
    m, steps = batch.walks.shape
    e = gp.embed.shape[1]

    weights = critic_scores(dp, batch.walks) * batch.rewards
    if subtract_baseline:
        weights = weights - weights.mean()
    coeff = -weights / m  # d J / d logp_it

    _, _, caches = _generator_forward(gp, batch.z, nodes=batch.walks,
                                      keep_caches=True)
    grads = zero_grads(gp)
    d = gp.hidden_dim
    dc = np.zeros((m, d))
    dh = np.zeros((m, d))
    rows = np.arange(m)
    packed = pack_cell(gp.cell)

    for t in reversed(range(steps)):
        prev, cache, probs, chosen, h = caches[t]
        dlogits = -coeff[:, None] * probs
        dlogits[rows, chosen] += coeff
        grads["out_w"] += h.T @ dlogits
        grads["out_b"] += dlogits.sum(axis=0)
        dh = dh + dlogits @ gp.out_w.T
        dx, dc, dh = lstm_step_backward(gp.cell, cache, dc, dh, grads, "cell.", e,
                                        packed=packed)
        np.add.at(grads["embed"], prev, dx)

    dinit = np.concatenate([dc, dh], axis=1)
    grads["init_w"] += batch.z.T @ dinit
    grads["init_b"] += dinit.sum(axis=0)

    for name, g in grads.items():
        if not np.isfinite(g).all():
            raise TrainingDiverged(f"non-finite generator gradient in {name}")
    return grads


# ---------------------------------------------------------------------------
# Optimizer
# ---------------------------------------------------------------------------

class RMSProp:
    """Per-parameter step rescaling by a running second moment."""

    def __init__(self, rho=0.9, eps=1e-8):
        self.rho = rho
        self.eps = eps
        self.acc = {}

    def scale(self, name, grad):
        acc = self.acc.get(name)
        if acc is None:
            acc = np.zeros_like(grad)
        acc = self.rho * acc + (1.0 - self.rho) * grad * grad
        self.acc[name] = acc
        return grad / (np.sqrt(acc) + self.eps)


# ---------------------------------------------------------------------------
# Training loop
# ---------------------------------------------------------------------------

# "per_sample" gates each walk's reward on its own critic score; "batch"
# gates on the previous iteration's generator loss; "always" skips the
# gate entirely (the training pseudocode's reward is unconditional);
# "off" fixes every reward at 1.
GATE_MODES = ("per_sample", "batch", "always", "off")


@dataclass
class TrainingConfig:
    iterations: int = 500
    batch_size: int = 64
    learning_rate: float = 5e-4
    n_critic: int = 5
    weight_clip: float = 0.01
    walk_length: int = 16
    reward: RewardKind = RewardKind.DENSITY_JACCARD
    gate: str = "per_sample"
    seed: int = 0
    hidden_dim: int = 32
    embed_dim: int = 32
    latent_dim: int = 16
    normalize_reward: bool = False
    subtract_baseline: bool = False

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.weight_clip <= 0:
            raise ValueError("weight_clip must be > 0")
        if self.n_critic < 1:
            raise ValueError("n_critic must be >= 1")
        if self.gate not in GATE_MODES:
            raise ValueError(f"gate must be one of {GATE_MODES}")
        if isinstance(self.reward, str):
            object.__setattr__(self, "reward", RewardKind(self.reward))

    def to_dict(self):
        d = asdict(self)
        d["reward"] = self.reward.value
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["reward"] = RewardKind(d["reward"])
        return cls(**d)


@dataclass
class TrainingStats:
    """Per-iteration monitoring trail."""

    loss_generator: list = field(default_factory=list)
    loss_critic: list = field(default_factory=list)
    mean_reward: list = field(default_factory=list)
    mean_critic_real: list = field(default_factory=list)
    mean_critic_fake: list = field(default_factory=list)

    def append(self, lg, ld, reward, d_real, d_fake):
        self.loss_generator.append(lg)
        self.loss_critic.append(ld)
        self.mean_reward.append(reward)
        self.mean_critic_real.append(d_real)
        self.mean_critic_fake.append(d_fake)

    def __len__(self):
        return len(self.loss_generator)

    def to_csv(self, path, config=None):
        with open(path, "w") as fh:
            if config is not None:
                for key in sorted(config):
                    fh.write(f"# {key}={config[key]}\n")
            fh.write("iteration,loss_generator,loss_critic,mean_reward,"
                     "mean_critic_real,mean_critic_fake\n")
            for i in range(len(self)):
                fh.write(f"{i},{self.loss_generator[i]!r},{self.loss_critic[i]!r},"
                         f"{self.mean_reward[i]!r},{self.mean_critic_real[i]!r},"
                         f"{self.mean_critic_fake[i]!r}\n")


def _batch_rewards(scorer, walks, d_scores, cfg, prev_loss_g):
    m = walks.shape[0]
    if cfg.gate == "off":
        rewards = np.ones(m)
    else:
        rewards = np.empty(m)
        for i in range(m):
            if cfg.gate == "per_sample":
                signal = d_scores[i]
            elif cfg.gate == "batch":
                # gate on the previous iteration's generator loss
                signal = prev_loss_g if prev_loss_g is not None else 1.0
            else:  # always
                signal = -1.0
            if signal < 0:
                rewards[i] = scorer.walk_score_sum(walks[i])
            else:
                rewards[i] = 1.0
    if cfg.normalize_reward:
        rewards = rewards / (walks.shape[1] - 1)
    return rewards


def train(graph, corpus, cfg):
    """Alternating critic/generator training; returns (params, stats).

    Per iteration: n_critic clipped critic ascents on (real, generated)
    batches, then one generator descent weighted by critic score times
    walk reward. Fully reproducible from cfg.seed.
    """
    if corpus.count < 1:
        raise ValueError("corpus is empty")
    if not corpus.matches(graph):
        raise ValueError("corpus fingerprint does not match the graph")
    if corpus.walk_length != cfg.walk_length:
        raise ValueError("corpus walk length differs from config")

    rng = np.random.default_rng(cfg.seed)
    gp = init_generator(graph.node_count, rng, cfg.hidden_dim, cfg.embed_dim,
                        cfg.latent_dim)
    dp = init_discriminator(graph.node_count, rng, cfg.hidden_dim, cfg.embed_dim)
    scorer = EdgeScorer(graph, cfg.reward)
    opt_g = RMSProp()
    opt_d = RMSProp()
    stats = TrainingStats()
    m = cfg.batch_size
    prev_loss_g = None

    for _ in range(cfg.iterations):
        loss_d = 0.0
        d_real_mean = 0.0
        for step in range(cfg.n_critic):
            real = corpus.walks[rng.integers(corpus.count, size=m)]
            z = rng.standard_normal((m, cfg.latent_dim))
            fake, _ = generate_walks(gp, z, cfg.walk_length, mode="sample", rng=rng)
            if step == cfg.n_critic - 1:
                d_real_mean = float(critic_scores(dp, real).mean())
                loss_d = d_real_mean - float(critic_scores(dp, fake).mean())
            critic_update(dp, real, fake, cfg.learning_rate, cfg.weight_clip,
                          opt=opt_d)

        z = rng.standard_normal((m, cfg.latent_dim))
        walks, logps = generate_walks(gp, z, cfg.walk_length, mode="sample", rng=rng)
        d_scores = critic_scores(dp, walks)
        rewards = _batch_rewards(scorer, walks, d_scores, cfg, prev_loss_g)
        batch = WalkBatch(z, walks, logps, rewards)
        grads = generator_gradient(gp, dp, batch,
                                   subtract_baseline=cfg.subtract_baseline)
        for name, arr in gp.blocks():
            arr -= cfg.learning_rate * opt_g.scale("gen." + name, grads[name])

        loss_g = float(-(d_scores * rewards).mean())
        prev_loss_g = loss_g
        stats.append(loss_g, loss_d, float(rewards.mean()), d_real_mean,
                     float(d_scores.mean()))
        if not (np.isfinite(loss_g) and np.isfinite(loss_d)):
            raise TrainingDiverged("training loss diverged", stats=stats)

    return gp, stats


# ---------------------------------------------------------------------------
# Checkpointing
# ---------------------------------------------------------------------------

CHECKPOINT_VERSION = 1


def _encode_blocks(params):
    out = {}
    for name, arr in params.blocks():
        out[name] = {
            "shape": list(arr.shape),
            "data": base64.b64encode(np.ascontiguousarray(arr, dtype=np.float64)
                                     .tobytes()).decode("ascii"),
        }
    return out


def _decode_block(entry):
    raw = base64.b64decode(entry["data"])
    return np.frombuffer(raw, dtype=np.float64).reshape(entry["shape"]).copy()


def save_model(path, gp, cfg):
    """Versioned textual dump of all parameter blocks plus the config."""
    payload = {
        "version": CHECKPOINT_VERSION,
        "node_count": gp.node_count,
        "config": cfg.to_dict(),
        "blocks": _encode_blocks(gp),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_model(path):
    with open(path, "r") as fh:
        payload = json.load(fh)
    if payload["version"] != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {payload['version']}")
    blocks = {name: _decode_block(entry) for name, entry in payload["blocks"].items()}
    cell = LSTMCellParams(**{k.split(".", 1)[1]: v for k, v in blocks.items()
                             if k.startswith("cell.")})
    gp = GeneratorParams(
        node_count=payload["node_count"],
        embed=blocks["embed"],
        init_w=blocks["init_w"],
        init_b=blocks["init_b"],
        cell=cell,
        out_w=blocks["out_w"],
        out_b=blocks["out_b"],
    )
    return gp, TrainingConfig.from_dict(payload["config"])
