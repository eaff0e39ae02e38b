"""vitalrank: vital-node ranking in complex networks.

Pipeline: SIR ground truth, collective feature engineering, representative
sampling, kernelized SVR, neighbourhood-extended scores; plus classic
centrality baselines and rank-quality metrics.
"""

from .graph import Graph, GraphParseError, GraphStats, graph_stats, load_edge_list, parse_edge_list
from .ranking import Ranking
from .sir import HAVE_COMPILED_KERNEL, SirConfig, VitalityEstimate, estimate_vitality, ground_truth_ranking, simulate_sir

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphParseError",
    "GraphStats",
    "graph_stats",
    "load_edge_list",
    "parse_edge_list",
    "Ranking",
    "SirConfig",
    "VitalityEstimate",
    "estimate_vitality",
    "ground_truth_ranking",
    "simulate_sir",
    "HAVE_COMPILED_KERNEL",
    "__version__",
]
