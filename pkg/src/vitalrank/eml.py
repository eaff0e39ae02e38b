"""End-to-end learned vitality ranking.

Pipeline: build feature vectors, pick a small training set (uniform or
cluster sampling), simulate the diffusion on those nodes only to get target
vitalities, fit the regressor, predict every node, then add the
coreness-weighted neighbour contribution:

    score(u) = pred(u) + alpha * sum over v in G(u) of eks(v) * pred(v)

Everything is deterministic given the two seeds (sampling and simulation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import _neighbour_sum
from .decomposition import extended_coreness
from .features import feature_matrix
from .graph import Graph
from .metrics import kendall_tau
from .ranking import Ranking
from .regression import KnnRegressor, SupportVectorRegressor
from .sampling import SampleSpec, default_k_max, k_candidates, kmeans, quota_sample, uniform_sample
from .sir import SirConfig, estimate_vitality

__all__ = ["EmlConfig", "eml_score", "run_eml", "run_eml_with_info"]

CV_FOLDS = 5


@dataclass(frozen=True)
class EmlConfig:
    """All knobs of the learned-ranking pipeline."""

    sir: SirConfig
    sample: SampleSpec = field(default_factory=SampleSpec)
    alpha: float = 0.5
    alpha1: float = 1.0
    alpha2: float = 1.0
    svr_c: float = 10.0
    svr_epsilon: float | None = None
    svr_sigma: float | None = None
    regressor: str = "svr"
    knn_k: int = 3
    workers: int = 1

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.regressor not in ("svr", "knn"):
            raise ValueError(f"unknown regressor {self.regressor!r}")


def eml_score(g: Graph, svr_pred: np.ndarray, eks: np.ndarray, alpha: float) -> np.ndarray:
    """score(u) = pred(u) + alpha * sum_{v in G(u)} eks(v) * pred(v)."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    svr_pred = np.asarray(svr_pred, dtype=np.float64)
    eks = np.asarray(eks, dtype=np.float64)
    if svr_pred.shape != (g.n,) or eks.shape != (g.n,):
        raise ValueError("predictions and eks must cover all nodes")
    return svr_pred + alpha * _neighbour_sum(g, eks * svr_pred)


def _make_regressor(cfg: EmlConfig):
    if cfg.regressor == "knn":
        return KnnRegressor(k=cfg.knn_k)
    return SupportVectorRegressor(C=cfg.svr_c, epsilon=cfg.svr_epsilon, sigma=cfg.svr_sigma)


def _cv_tau(x_train, targets: np.ndarray, cfg: EmlConfig, rng: np.random.Generator) -> float:
    """Pooled held-out rank correlation of the regressor on one training set."""
    s = len(targets)
    if s < 3:
        return float("nan")
    folds = min(CV_FOLDS, s)
    order = rng.permutation(s)
    pred = np.empty(s)
    for f in range(folds):
        held = order[f::folds]
        rest = np.setdiff1d(order, held)
        reg = _make_regressor(cfg)
        reg.fit(x_train[rest], targets[rest])
        pred[held] = reg.predict(x_train[held])
    return kendall_tau(pred, targets)


def _select_training_nodes(g: Graph, x, s: int, cfg: EmlConfig):
    """Training node ids, their simulated targets, and the cluster count used."""
    root = np.random.SeedSequence(cfg.sample.rng_seed)
    ss_select, ss_cv = root.spawn(2)
    rng = np.random.Generator(np.random.PCG64(ss_select))

    def simulate(nodes: np.ndarray) -> np.ndarray:
        ests = estimate_vitality(g, nodes, cfg.sir, workers=cfg.workers)
        return np.array([e.mean_influence for e in ests])

    if cfg.sample.method == "uniform":
        nodes = uniform_sample(range(g.n), s, rng)
        return nodes, simulate(nodes), None

    k_max = default_k_max(s)
    if cfg.sample.k_override is not None:
        candidates = [cfg.sample.k_override]
    else:
        ke, kg = k_candidates(x, rng, k_max)
        candidates = sorted({ke, kg})

    if len(candidates) == 1:
        clustering = kmeans(x, candidates[0], rng)
        nodes = quota_sample(clustering, s, rng)
        return nodes, simulate(nodes), candidates[0]

    # elbow and gap disagree: score both k by cross-validated rank
    # correlation on their own sampled training sets, keep the better
    # (ties and undefined taus fall back to the smaller k)
    rng_cv = np.random.Generator(np.random.PCG64(ss_cv))
    best = None
    for k in candidates:
        clustering = kmeans(x, k, rng)
        nodes = quota_sample(clustering, s, rng)
        targets = simulate(nodes)
        tau = _cv_tau(x[nodes], targets, cfg, rng_cv)
        score = -math.inf if math.isnan(tau) else tau
        if best is None or score > best[0]:
            best = (score, k, nodes, targets)
    _, k, nodes, targets = best
    return nodes, targets, k


def run_eml_with_info(g: Graph, cfg: EmlConfig) -> tuple[Ranking, dict]:
    """Full pipeline; returns the ranking plus run diagnostics."""
    if g.n < 1:
        raise ValueError("graph must be non-empty")
    s = cfg.sample.size(g.n)
    if s < 1:
        raise ValueError("sample size rounded to 0; increase --sample-frac")

    fm = feature_matrix(g, cfg.alpha1, cfg.alpha2)
    x = fm.to_csr()
    eks = extended_coreness(g)

    nodes, targets, k = _select_training_nodes(g, x, s, cfg)
    reg = _make_regressor(cfg)
    reg.fit(x[nodes], targets)
    preds = reg.predict(x)
    scores = eml_score(g, preds, eks, cfg.alpha)
    ranking = Ranking.from_scores(scores, method_name="eml")

    info = {
        "sample_nodes": nodes.tolist(),
        "sample_targets": targets.tolist(),
        "sample_size": int(s),
        "cluster_k": k,
        "regressor": cfg.regressor,
    }
    if cfg.regressor == "svr" and reg.model is not None:
        info["svr_sigma"] = reg.model.kernel.sigma
        info["svr_epsilon"] = reg.model.epsilon
        info["svr_kkt_residual"] = reg.model.kkt_residual
    return ranking, info


def run_eml(g: Graph, cfg: EmlConfig) -> Ranking:
    return run_eml_with_info(g, cfg)[0]
