"""Monte-Carlo SIR diffusion and ground-truth vitality estimation.

The hot loop lives in the compiled extension ``_sirkernel`` when it is
available, with ``_sir_py`` as a pure-Python fallback selected at import.
Both consume identical RNG streams (see ``_sir_py``), so the choice of
implementation, execution order, and worker count never change a result.

Influence counts all Removed nodes at steady state, seed included, so it is
always >= 1; subtracting the seed uniformly would not change any ranking.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _sir_py
from .graph import Graph
from .ranking import Ranking

try:
    from . import _sirkernel

    HAVE_COMPILED_KERNEL = True
except ImportError:  # pragma: no cover - depends on the build
    _sirkernel = None
    HAVE_COMPILED_KERNEL = False

__all__ = [
    "SirConfig",
    "VitalityEstimate",
    "simulate_sir",
    "estimate_vitality",
    "ground_truth_ranking",
    "HAVE_COMPILED_KERNEL",
]

DEFAULT_RUNS = 3000


def _validate_probs(beta: float, mu: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must be in (0, 1], got {mu}")


@dataclass(frozen=True)
class SirConfig:
    """Transmission/recovery probabilities, run count, and master seed."""

    beta: float
    mu: float = 1.0
    runs: int = DEFAULT_RUNS
    master_seed: int = 0

    def __post_init__(self):
        _validate_probs(self.beta, self.mu)
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass(frozen=True)
class VitalityEstimate:
    node: int
    mean_influence: float
    runs: int
    std_error: float = float("nan")


def _select_kernel(impl: str):
    if impl == "auto":
        return _sirkernel if HAVE_COMPILED_KERNEL else _sir_py
    if impl == "compiled":
        if not HAVE_COMPILED_KERNEL:
            raise RuntimeError("compiled SIR kernel is not available")
        return _sirkernel
    if impl == "python":
        return _sir_py
    raise ValueError(f"unknown impl {impl!r}; expected auto|compiled|python")


def simulate_sir(
    g: Graph,
    seed_node: int,
    beta: float,
    mu: float,
    seed: int = 0,
    run_index: int = 0,
) -> int:
    """One SIR realization from ``seed_node``; returns the removed count.

    ``(seed, seed_node, run_index)`` fully determine the realization; this is
    the same realization a batch estimate with master seed ``seed`` would use
    for that node and run. Single runs always take the reference Python path.
    """
    g._check(seed_node)
    _validate_probs(beta, mu)
    rng = _sir_py.SplitMix64(_sir_py.run_seed(seed, seed_node, run_index))
    status = np.zeros(g.n, dtype=np.uint8)
    return _sir_py.sir_run(g.indptr, g.indices, status, seed_node, beta, mu, rng)


def estimate_vitality(
    g: Graph,
    nodes,
    cfg: SirConfig,
    workers: int = 1,
    impl: str = "auto",
) -> list[VitalityEstimate]:
    """Mean influence of each node over ``cfg.runs`` independent runs.

    Deterministic for a given ``cfg.master_seed`` regardless of ``workers``
    or ``impl``: per-run streams are keyed by (master_seed, node, run) and
    integer influence sums are aggregated before a single division.
    """
    node_arr = np.asarray(list(nodes), dtype=np.int32)
    if node_arr.size == 0:
        return []
    for u in node_arr:
        g._check(int(u))
    kernel = _select_kernel(impl)

    if workers <= 1 or node_arr.size == 1:
        sums, sumsq = kernel.simulate_batch(
            g.indptr, g.indices, node_arr, cfg.beta, cfg.mu, cfg.runs, cfg.master_seed
        )
    else:
        chunks = np.array_split(node_arr, min(workers, node_arr.size))
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(
                pool.map(
                    lambda c: kernel.simulate_batch(
                        g.indptr, g.indices, c, cfg.beta, cfg.mu, cfg.runs, cfg.master_seed
                    ),
                    chunks,
                )
            )
        sums = np.concatenate([p[0] for p in parts])
        sumsq = np.concatenate([p[1] for p in parts])

    means = sums / cfg.runs
    # sample standard error of the mean; 0 when runs == 1
    if cfg.runs > 1:
        var = (sumsq - sums * means) / (cfg.runs - 1)
        se = np.sqrt(np.maximum(var, 0.0) / cfg.runs)
    else:
        se = np.full(node_arr.size, np.nan)
    return [
        VitalityEstimate(int(u), float(means[i]), cfg.runs, float(se[i]))
        for i, u in enumerate(node_arr)
    ]


def ground_truth_ranking(
    g: Graph, cfg: SirConfig, workers: int = 1, impl: str = "auto"
) -> Ranking:
    """All nodes ranked by simulated mean influence, descending."""
    estimates = estimate_vitality(g, range(g.n), cfg, workers=workers, impl=impl)
    scores = np.array([e.mean_influence for e in estimates])
    return Ranking.from_scores(scores, method_name="ground-truth")
