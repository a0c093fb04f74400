"""Experiment harness: synthetic data, the end-to-end sparsification
pipeline, and the method x ratio x detection-algorithm result grids.

All randomness flows from one top-level seed through named substreams
(dataset, corpus, training, assembly, detection, ...), so any grid cell
can be recomputed in isolation bit-identically.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, evaluation
from .assembly import AssemblyBudget, assemble, count_artificial_edges, count_edges
from .gan import TrainingConfig, sample_model_walks, train
from .graph import Graph, load_edge_list, load_labels
from .scoring import RewardKind
from .walks import random_node_corpus, sample_corpus

logger = logging.getLogger(__name__)

METHODS = ("GSGAN", "JC", "BC", "RAND", "LSPAR", "LD")
VARIANTS = ("GSGAN", "GSGAN_Jaccard", "GSGAN_NR", "GSGAN_NRWs")
ALGORITHMS = ("louvain", "labelprop", "greedy")

SEED_ENV_VAR = "WALKSPARSE_SEED"


def substream(*keys):
    """Seeded generator for a named stream derived from mixed keys."""
    return np.random.default_rng(np.random.SeedSequence(_stream_words(*keys)))


def _stream_words(*keys):
    words = []
    for key in keys:
        if isinstance(key, (int, np.integer)):
            words.append(int(key))
        else:
            digest = hashlib.sha256(str(key).encode()).digest()
            words.append(int.from_bytes(digest[:8], "little"))
    return words


def stream_seed(*keys):
    """A plain integer seed for APIs that take one."""
    return int(substream(*keys).integers(2 ** 63))


# ---------------------------------------------------------------------------
# Synthetic data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SBMSpec:
    """Planted-partition random graph specification."""

    sizes: tuple
    p_in: float
    p_out: float

    def __post_init__(self):
        if len(self.sizes) == 0 or any(s < 1 for s in self.sizes):
            raise ValueError("block sizes must be positive")
        if not (0.0 <= self.p_out <= self.p_in <= 1.0):
            raise ValueError("need 0 <= p_out <= p_in <= 1")


def sbm_generate(spec, rng):
    """Sample a graph and its ground-truth block labels.

    Each intra-block pair is an edge with probability p_in, each
    inter-block pair with p_out, all independently.
    """
    sizes = list(spec.sizes)
    offsets = np.cumsum([0] + sizes)
    n = int(offsets[-1])
    edges = []

    for a in range(len(sizes)):
        lo = offsets[a]
        iu, iv = np.triu_indices(sizes[a], k=1)
        if len(iu):
            mask = rng.random(len(iu)) < spec.p_in
            edges.extend(zip((lo + iu[mask]).tolist(), (lo + iv[mask]).tolist()))
        for b in range(a + 1, len(sizes)):
            lob = offsets[b]
            mask = rng.random((sizes[a], sizes[b])) < spec.p_out
            ru, rv = np.nonzero(mask)
            edges.extend(zip((lo + ru).tolist(), (lob + rv).tolist()))

    labels = np.repeat(np.arange(len(sizes)), sizes).astype(np.int64)
    return Graph(n, edges), labels


def withhold_intra_edges(graph, labels, fraction, rng):
    """Drop a uniform fraction of the intra-community edges.

    Produces inputs whose missing within-community relationships a
    sparsifier can only recover by inventing edges.
    """
    intra = [(int(u), int(v)) for u, v in graph.edges if labels[u] == labels[v]]
    inter = [(int(u), int(v)) for u, v in graph.edges if labels[u] != labels[v]]
    drop = int(round(fraction * len(intra)))
    keep_idx = rng.choice(len(intra), size=len(intra) - drop, replace=False)
    kept = [intra[i] for i in np.sort(keep_idx)]
    return Graph(graph.node_count, kept + inter)


# ---------------------------------------------------------------------------
# End-to-end pipeline
# ---------------------------------------------------------------------------

@dataclass
class PipelineConfig:
    """Everything the walk-model pipeline needs besides the input graph."""

    training: TrainingConfig = field(default_factory=TrainingConfig)
    corpus_size: int = 2000
    assembly_walks: int | None = None  # default: ~10 observations per kept edge
    assembly_mode: str = "argmax"
    artificial_edges: bool = True

    def walks_for(self, graph):
        if self.assembly_walks is not None:
            return self.assembly_walks
        t = self.training.walk_length
        return max(1, math.ceil(10 * graph.edge_count / (t - 1)))


def variant_config(pcfg, variant):
    """Training config + corpus kind for one ablation variant.

    Variants differ from the full method only in the reward/gate fields
    or in the realness of the training corpus:
      GSGAN         density-normalized overlap reward
      GSGAN_Jaccard plain overlap reward
      GSGAN_NR      unit reward, gate disabled
      GSGAN_NRWs    full reward but random node sequences as "real" data
    """
    tcfg = pcfg.training
    if variant == "GSGAN":
        return replace(tcfg, reward=RewardKind.DENSITY_JACCARD), "real"
    if variant == "GSGAN_Jaccard":
        return replace(tcfg, reward=RewardKind.JACCARD), "real"
    if variant == "GSGAN_NR":
        return replace(tcfg, reward=RewardKind.UNIT, gate="off"), "real"
    if variant == "GSGAN_NRWs":
        return replace(tcfg, reward=RewardKind.DENSITY_JACCARD), "random_nodes"
    raise ValueError(f"unknown variant {variant!r}")


def train_pipeline_model(graph, pcfg, variant="GSGAN", seed=0):
    """Corpus sampling plus adversarial training for one variant/seed."""
    tcfg, corpus_kind = variant_config(pcfg, variant)
    tcfg = replace(tcfg, seed=stream_seed(seed, "train", variant))
    corpus_seed = stream_seed(seed, "corpus", corpus_kind)
    if corpus_kind == "real":
        corpus = sample_corpus(graph, pcfg.corpus_size, tcfg.walk_length, corpus_seed)
    else:
        corpus = random_node_corpus(graph, pcfg.corpus_size, tcfg.walk_length,
                                    corpus_seed)
    gp, stats = train(graph, corpus, tcfg)
    return gp, stats


def assemble_from_model(gp, graph, ratio, pcfg, seed=0):
    """Generate walks from a trained model and assemble the output graph."""
    rng = substream(seed, "assembly")
    walks = sample_model_walks(gp, pcfg.walks_for(graph),
                               pcfg.training.walk_length, rng)
    score = count_edges(walks, node_count=graph.node_count)
    budget = AssemblyBudget.from_ratio(ratio, graph.edge_count)
    filt = None if pcfg.artificial_edges else graph
    out, report = assemble(score, budget, artificial_filter=filt,
                           mode=pcfg.assembly_mode,
                           rng=substream(seed, "assembly-sample"))
    report.artificial_edges = count_artificial_edges(out, graph)
    return out, report


def run_gsgan_pipeline(graph, ratio, pcfg, variant="GSGAN", seed=0):
    """Full pipeline: corpus -> train -> generate -> count -> assemble."""
    gp, _ = train_pipeline_model(graph, pcfg, variant=variant, seed=seed)
    return assemble_from_model(gp, graph, ratio, pcfg, seed=seed)


def run_baseline(graph, method, ratio, seed=0):
    """One of the selection-only sparsifiers at the given ratio."""
    d = AssemblyBudget.from_ratio(ratio, graph.edge_count).target_edges
    if method == "JC":
        return baselines.sparsify_jc(graph, d)
    if method == "BC":
        return baselines.sparsify_bc(graph, d)
    if method == "RAND":
        return baselines.sparsify_random(graph, d, substream(seed, "rand", ratio))
    if method == "LSPAR":
        return baselines.sparsify_lspar(graph, d)
    if method == "LD":
        return baselines.sparsify_ld(graph, d)
    raise ValueError(f"unknown method {method!r}")


def detect(graph, algorithm, rng):
    if algorithm == "louvain":
        return evaluation.louvain(graph, rng)
    if algorithm == "labelprop":
        return evaluation.label_propagation(graph, rng)
    if algorithm == "greedy":
        return evaluation.greedy_modularity(graph)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# Experiment grid
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    dataset_name: str = "sbm"
    input_path: str | None = None
    labels_path: str | None = None
    sbm: SBMSpec | None = field(
        default_factory=lambda: SBMSpec(sizes=(50, 50), p_in=0.3, p_out=0.02))
    ratios: tuple = (20.0, 10.0, 5.0, 1.0)
    methods: tuple = METHODS
    variants: tuple = ()
    algorithms: tuple = ALGORITHMS
    seeds: tuple = (0, 1, 2, 3, 4)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    top_seed: int = 0
    measure_time: bool = True

    def __post_init__(self):
        if not self.ratios or any(not (0 < r <= 100) for r in self.ratios):
            raise ValueError("ratios must lie in (0, 100]")
        if not (self.methods or self.variants):
            raise ValueError("need at least one method or variant")
        if not self.algorithms:
            raise ValueError("need at least one detection algorithm")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        for v in self.variants:
            if v not in VARIANTS:
                raise ValueError(f"unknown variant {v!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")


RESULT_FIELDS = ("dataset", "method", "variant", "ratio", "algorithm", "seed",
                 "ari", "modularity", "detection_seconds", "edge_count",
                 "artificial_edges")


@dataclass
class ResultRow:
    dataset: str
    method: str
    variant: str
    ratio: float
    algorithm: str
    seed: int
    ari: float | None = None
    modularity: float | None = None
    detection_seconds: float | None = None
    edge_count: int | None = None
    artificial_edges: int | None = None
    error: str | None = None

    def csv_values(self):
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(x)
            return str(x)
        return [fmt(getattr(self, f)) for f in RESULT_FIELDS]


def write_rows(rows, path):
    with open(path, "w") as fh:
        fh.write(",".join(RESULT_FIELDS) + "\n")
        for row in rows:
            fh.write(",".join(row.csv_values()) + "\n")


def write_summary(rows, path):
    """Median-over-seeds companion table, one line per grid cell."""
    cells = {}
    for row in rows:
        if row.error is not None:
            continue
        key = (row.dataset, row.method, row.variant, row.ratio, row.algorithm)
        cells.setdefault(key, []).append(row)

    with open(path, "w") as fh:
        fh.write("dataset,method,variant,ratio,algorithm,n_seeds,"
                 "median_ari,median_modularity,median_detection_seconds\n")
        for key in sorted(cells, key=lambda k: tuple(str(x) for x in k)):
            group = cells[key]
            med = lambda vals: (repr(float(np.median(vals)))
                                if vals and all(v is not None for v in vals) else "")
            fh.write(",".join([
                key[0], key[1], key[2], repr(float(key[3])), key[4],
                str(len(group)),
                med([r.ari for r in group]),
                med([r.modularity for r in group]),
                med([r.detection_seconds for r in group]),
            ]) + "\n")


def load_dataset(cfg):
    """Graph plus optional ground truth for the configured input."""
    if cfg.input_path is not None:
        graph, relabel = load_edge_list(cfg.input_path)
        truth = None
        if cfg.labels_path is not None:
            truth = load_labels(cfg.labels_path, relabel, graph.node_count)
        return graph, truth, relabel
    if cfg.sbm is None:
        raise ValueError("config names neither an input file nor an SBM")
    rng = substream(cfg.top_seed, "dataset", cfg.dataset_name)
    graph, truth = sbm_generate(cfg.sbm, rng)
    return graph, truth, None


def _evaluate_cell(cfg, graph, truth, sparse, method, variant, ratio,
                   algorithm, seed, artificial):
    rng = substream(cfg.top_seed, "detection", cfg.dataset_name, method,
                    variant, ratio, algorithm, seed)
    if cfg.measure_time:
        partition, seconds = evaluation.timed(lambda: detect(sparse, algorithm, rng))
    else:
        partition, seconds = detect(sparse, algorithm, rng), None
    return ResultRow(
        dataset=cfg.dataset_name,
        method=method,
        variant=variant,
        ratio=float(ratio),
        algorithm=algorithm,
        seed=seed,
        ari=None if truth is None else evaluation.ari(truth, partition),
        modularity=evaluation.modularity(sparse, partition),
        detection_seconds=seconds,
        edge_count=sparse.edge_count,
        artificial_edges=artificial,
    )


def run_grid(cfg):
    """Run every (method/variant, ratio, algorithm, seed) cell plus the
    unsparsified standard line; returns rows sorted deterministically.

    A failing cell becomes an error row (metrics empty) and the grid
    continues.
    """
    graph, truth, _ = load_dataset(cfg)
    rows = []

    # Standard line: detection quality on the original graph.
    for algorithm in cfg.algorithms:
        for seed in cfg.seeds:
            rows.append(_evaluate_cell(cfg, graph, truth, graph, "ORIGINAL", "",
                                       100.0, algorithm, seed, 0))

    jobs = [("method", m) for m in cfg.methods]
    jobs += [("variant", v) for v in cfg.variants if v not in cfg.methods]

    trained = {}      # (variant, seed) -> generator params
    base_cache = {}   # (method, ratio, seed-or-None) -> sparsified graph

    for kind, name in jobs:
        is_walk_model = name == "GSGAN" or kind == "variant"
        variant = name if is_walk_model else ""
        for seed in cfg.seeds:
            if is_walk_model:
                key = (variant, seed)
                if key not in trained:
                    try:
                        gp, _ = train_pipeline_model(graph, cfg.pipeline,
                                                     variant=variant,
                                                     seed=stream_seed(cfg.top_seed, "cell", name, seed))
                        trained[key] = gp
                    except Exception as exc:  # noqa: BLE001 - grid must continue
                        logger.exception("training failed for %s seed %s", name, seed)
                        trained[key] = exc
            for ratio in cfg.ratios:
                method = "GSGAN" if is_walk_model else name
                try:
                    if is_walk_model:
                        gp = trained[(variant, seed)]
                        if isinstance(gp, Exception):
                            raise gp
                        sparse, report = assemble_from_model(
                            gp, graph, ratio, cfg.pipeline,
                            seed=stream_seed(cfg.top_seed, "cell", name, seed))
                        artificial = report.artificial_edges
                    else:
                        ckey = (method, ratio, seed if method == "RAND" else None)
                        if ckey not in base_cache:
                            base_cache[ckey] = run_baseline(
                                graph, method, ratio,
                                seed=stream_seed(cfg.top_seed, "cell", name, seed))
                        sparse = base_cache[ckey]
                        artificial = 0
                    for algorithm in cfg.algorithms:
                        rows.append(_evaluate_cell(cfg, graph, truth, sparse,
                                                   method, variant, ratio,
                                                   algorithm, seed, artificial))
                except Exception as exc:  # noqa: BLE001 - grid must continue
                    logger.exception("cell failed: %s ratio %s seed %s",
                                     name, ratio, seed)
                    for algorithm in cfg.algorithms:
                        rows.append(ResultRow(cfg.dataset_name, method, variant,
                                              float(ratio), algorithm, seed,
                                              error=str(exc)))

    rows.sort(key=lambda r: (r.dataset, r.method, r.variant, -r.ratio,
                             r.algorithm, r.seed))
    return rows


# ---------------------------------------------------------------------------
# Flat key=value configuration files
# ---------------------------------------------------------------------------

def parse_config_file(path):
    """Read flat "key = value" lines into a string mapping.

    Blank lines and '#' comments are ignored; later keys override earlier
    ones.
    """
    mapping = {}
    with open(path, "r") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = line.split("=", 1)
            mapping[key.strip()] = value.strip()
    return mapping


def _split_list(value):
    return tuple(part.strip() for part in value.split(",") if part.strip())


def training_config_from_mapping(mapping, seed=0):
    kwargs = {"seed": seed}
    casts = {
        "iterations": int, "batch_size": int, "learning_rate": float,
        "n_critic": int, "weight_clip": float, "walk_length": int,
        "hidden_dim": int, "embed_dim": int, "latent_dim": int,
        "reward": str, "gate": str,
        "normalize_reward": lambda v: v.lower() in ("1", "true", "on", "yes"),
        "subtract_baseline": lambda v: v.lower() in ("1", "true", "on", "yes"),
    }
    for key, cast in casts.items():
        if key in mapping:
            kwargs[key] = cast(mapping[key])
    return TrainingConfig(**kwargs)


def pipeline_config_from_mapping(mapping, seed=0):
    flag = lambda v: v.lower() in ("1", "true", "on", "yes")
    return PipelineConfig(
        training=training_config_from_mapping(mapping, seed=seed),
        corpus_size=int(mapping.get("corpus_size", 2000)),
        assembly_walks=(int(mapping["assembly_walks"])
                        if "assembly_walks" in mapping else None),
        assembly_mode=mapping.get("assembly_mode", "argmax"),
        artificial_edges=flag(mapping.get("artificial_edges", "on")),
    )


def experiment_from_mapping(mapping, seed_override=None):
    """Build an ExperimentConfig from a flat mapping (see README for keys)."""
    top_seed = int(mapping.get("seed", 0))
    if seed_override is not None:
        top_seed = int(seed_override)

    sbm = None
    input_path = mapping.get("input")
    if input_path in (None, "", "sbm"):
        input_path = None
        sizes = tuple(int(s) for s in _split_list(mapping.get("sbm_sizes", "50,50")))
        sbm = SBMSpec(sizes=sizes,
                      p_in=float(mapping.get("sbm_p_in", 0.3)),
                      p_out=float(mapping.get("sbm_p_out", 0.02)))

    flag = lambda v: v.lower() in ("1", "true", "on", "yes")
    return ExperimentConfig(
        dataset_name=mapping.get("dataset", "sbm"),
        input_path=input_path,
        labels_path=mapping.get("labels"),
        sbm=sbm,
        ratios=tuple(float(r) for r in _split_list(mapping.get("ratios", "20,10,5,1"))),
        methods=_split_list(mapping.get("methods", ",".join(METHODS))),
        variants=_split_list(mapping.get("variants", "")),
        algorithms=_split_list(mapping.get("algorithms", ",".join(ALGORITHMS))),
        seeds=tuple(int(s) for s in _split_list(mapping.get("seeds", "0,1,2,3,4"))),
        pipeline=pipeline_config_from_mapping(mapping, seed=top_seed),
        top_seed=top_seed,
        measure_time=flag(mapping.get("measure_time", "on")),
    )
