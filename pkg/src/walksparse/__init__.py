"""Graph sparsification for community detection via generative walks.

The pipeline: sample real random walks from the input graph, train an
LSTM generator against a clipped critic with an edge-importance reward,
then reassemble a graph (possibly containing new "artificial" edges) from
the generated walks. Reference sparsifiers, community detection
algorithms, and an experiment harness reproduce the evaluation protocol
at desk scale.
"""

from .graph import Graph, NodeRelabeling, load_edge_list, export_edge_list
from .walks import WalkCorpus, sample_walk, sample_corpus, walk_edges
from .scoring import RewardKind, jaccard, density_jaccard, f_score, walk_reward
from .assembly import ScoreMatrix, AssemblyBudget, count_edges, edge_probabilities, assemble
from .gan import TrainingConfig, TrainingStats, train, generate_walks
from .harness import (SBMSpec, PipelineConfig, ExperimentConfig, sbm_generate,
                      run_gsgan_pipeline, run_baseline, run_grid)

__all__ = [
    "Graph", "NodeRelabeling", "load_edge_list", "export_edge_list",
    "WalkCorpus", "sample_walk", "sample_corpus", "walk_edges",
    "RewardKind", "jaccard", "density_jaccard", "f_score", "walk_reward",
    "ScoreMatrix", "AssemblyBudget", "count_edges", "edge_probabilities", "assemble",
    "TrainingConfig", "TrainingStats", "train", "generate_walks",
    "SBMSpec", "PipelineConfig", "ExperimentConfig", "sbm_generate",
    "run_gsgan_pipeline", "run_baseline", "run_grid",
]

__version__ = "0.1.0"
