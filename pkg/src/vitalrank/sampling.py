"""Training-node selection: uniform sampling and cluster sampling in feature space.

Cluster sampling clusters the nodes' feature vectors with k-means and draws
an equal quota from every cluster, so that structurally different nodes all
reach the training set even when the degree distribution is heavy-tailed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import sparse

__all__ = [
    "SampleSpec",
    "Clustering",
    "uniform_sample",
    "kmeans",
    "elbow_k",
    "gap_k",
    "k_candidates",
    "choose_k",
    "cluster_sample",
    "default_k_max",
]

DEFAULT_FRACTION = 0.005
GAP_REFERENCE_SETS = 10


@dataclass(frozen=True)
class SampleSpec:
    """How to pick the training nodes."""

    fraction: float = DEFAULT_FRACTION
    method: str = "uniform"
    rng_seed: int = 0
    k_override: int | None = None

    def __post_init__(self):
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must be in (0, 1]")
        if self.method not in ("uniform", "cluster"):
            raise ValueError(f"unknown sampling method {self.method!r}")
        if self.k_override is not None and self.k_override < 1:
            raise ValueError("k_override must be >= 1")

    def size(self, n: int) -> int:
        return max(1, int(math.floor(self.fraction * n + 0.5)))


@dataclass
class Clustering:
    k: int
    assignment: np.ndarray
    centroids: np.ndarray
    inertia: float

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == c)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def uniform_sample(nodes, s: int, rng) -> np.ndarray:
    """s distinct nodes, every size-s subset equally likely."""
    nodes = np.asarray(list(nodes), dtype=np.int64)
    if s < 1:
        raise ValueError("sample size must be >= 1")
    if s > nodes.size:
        raise ValueError(f"cannot draw {s} from {nodes.size} nodes without replacement")
    rng = _as_generator(rng)
    return np.sort(rng.choice(nodes, size=s, replace=False))


def _row_norms_sq(x) -> np.ndarray:
    if sparse.issparse(x):
        return np.asarray(x.multiply(x).sum(axis=1)).ravel()
    return np.einsum("ij,ij->i", x, x)


def _dists_sq(x, centroids: np.ndarray, x_norms: np.ndarray) -> np.ndarray:
    cross = np.asarray(x @ centroids.T)
    c_norms = np.einsum("ij,ij->i", centroids, centroids)
    return np.maximum(x_norms[:, None] + c_norms[None, :] - 2.0 * cross, 0.0)


def _row_dense(x, i: int) -> np.ndarray:
    if sparse.issparse(x):
        return np.asarray(x[i].todense()).ravel()
    return np.asarray(x[i], dtype=np.float64)


def _kmeanspp_init(x, k: int, rng: np.random.Generator, x_norms: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    centroids = np.empty((k, x.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = _row_dense(x, first)
    d2 = _dists_sq(x, centroids[:1], x_norms)[:, 0]
    for c in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            nxt = int(rng.integers(n))  # all points coincide with a centroid
        centroids[c] = _row_dense(x, nxt)
        d2 = np.minimum(d2, _dists_sq(x, centroids[c : c + 1], x_norms)[:, 0])
    return centroids


def kmeans(x, k: int, rng, max_iters: int = 100) -> Clustering:
    """Lloyd's algorithm from a k-means++ start; deterministic per seed.

    Inertia is checked to be non-increasing every iteration. Clusters that
    empty out are re-seeded at the point currently farthest from its
    centroid.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = x.shape[0]
    if n < 1:
        raise ValueError("need at least one vector")
    rng = _as_generator(rng)
    x_norms = _row_norms_sq(x)
    centroids = _kmeanspp_init(x, k, rng, x_norms)

    prev_assign = None
    prev_inertia = np.inf
    assignment = np.zeros(n, dtype=np.int64)
    inertia = 0.0
    for _ in range(max_iters):
        d2 = _dists_sq(x, centroids, x_norms)
        assignment = np.argmin(d2, axis=1)
        point_d2 = d2[np.arange(n), assignment]

        present = np.bincount(assignment, minlength=k) > 0
        for c in np.flatnonzero(~present):
            far = int(np.argmax(point_d2))
            centroids[c] = _row_dense(x, far)
            assignment[far] = c
            point_d2[far] = 0.0

        inertia = float(point_d2.sum())
        if inertia > prev_inertia + 1e-9 * max(1.0, prev_inertia):
            raise AssertionError("k-means inertia increased")
        if prev_assign is not None and np.array_equal(assignment, prev_assign):
            break
        prev_assign = assignment.copy()
        prev_inertia = inertia

        for c in range(k):
            members = np.flatnonzero(assignment == c)
            if sparse.issparse(x):
                centroids[c] = np.asarray(x[members].mean(axis=0)).ravel()
            else:
                centroids[c] = x[members].mean(axis=0)

    return Clustering(k=k, assignment=assignment, centroids=centroids, inertia=inertia)


def default_k_max(s: int) -> int:
    """Scan bound for k-selection given the eventual sample size s."""
    return max(1, min(10, math.ceil(math.sqrt(s))))


def _inertia_curve(x, rng: np.random.Generator, k_max: int) -> list[float]:
    return [kmeans(x, k, rng).inertia for k in range(1, k_max + 1)]


def elbow_k(x, rng, k_max: int) -> int:
    """k with the largest second difference of the inertia curve."""
    rng = _as_generator(rng)
    if k_max < 3:
        return 1
    inertia = _inertia_curve(x, rng, k_max)
    second = [inertia[i - 1] - 2 * inertia[i] + inertia[i + 1] for i in range(1, k_max - 1)]
    return 2 + int(np.argmax(second))


def _bounding_box(x) -> tuple[np.ndarray, np.ndarray]:
    if sparse.issparse(x):
        lo = np.asarray(x.min(axis=0).todense()).ravel()
        hi = np.asarray(x.max(axis=0).todense()).ravel()
    else:
        lo, hi = x.min(axis=0), x.max(axis=0)
    return lo, hi


def gap_k(x, rng, k_max: int, n_refs: int = GAP_REFERENCE_SETS) -> int:
    """Tibshirani gap statistic with uniform bounding-box reference sets.

    Picks the smallest k with gap(k) >= gap(k+1) - s_{k+1}; falls back to
    k_max when the criterion never fires.
    """
    rng = _as_generator(rng)
    if k_max < 2:
        return 1
    tiny = 1e-12
    log_w = np.log(np.maximum(_inertia_curve(x, rng, k_max), tiny))
    lo, hi = _bounding_box(x)
    n = x.shape[0]
    ref_log_w = np.empty((n_refs, k_max))
    for b in range(n_refs):
        ref = lo + rng.random((n, len(lo))) * (hi - lo)
        ref_log_w[b] = np.log(np.maximum(_inertia_curve(ref, rng, k_max), tiny))
    gap = ref_log_w.mean(axis=0) - log_w
    sk = ref_log_w.std(axis=0, ddof=0) * math.sqrt(1.0 + 1.0 / n_refs)
    for k in range(1, k_max):
        if gap[k - 1] >= gap[k] - sk[k]:
            return k
    return k_max


def _all_identical(x) -> bool:
    if x.shape[0] < 2:
        return True
    x_norms = _row_norms_sq(x)
    first = _row_dense(x, 0)[None, :]
    return not np.any(_dists_sq(x, first, x_norms) > 0)


def k_candidates(x, rng, k_max: int) -> tuple[int, int]:
    """(k_elbow, k_gap); the two criteria may disagree."""
    rng = _as_generator(rng)
    return elbow_k(x, rng, k_max), gap_k(x, rng, k_max)


def choose_k(
    x,
    rng,
    k_max: int | None = None,
    arbitrate: Callable[[list[int]], int] | None = None,
) -> int:
    """Cluster count from the elbow and gap criteria.

    When the two disagree, ``arbitrate`` (typically downstream
    cross-validation supplied by the pipeline) picks between them; without an
    arbiter the smaller k wins. All-identical input short-circuits to 1.
    """
    if x.shape[0] < 2:
        raise ValueError("choose_k needs at least 2 vectors")
    if _all_identical(x):
        return 1
    if k_max is None:
        k_max = default_k_max(x.shape[0])
    ke, kg = k_candidates(x, rng, k_max)
    if ke == kg:
        return ke
    if arbitrate is None:
        return min(ke, kg)
    return arbitrate(sorted({ke, kg}))


def cluster_sample(g, x, s: int, rng, k: int | None = None) -> np.ndarray:
    """s nodes drawn with per-cluster quotas from a k-means clustering of x.

    Quota is floor(s/k) per cluster; the remainder goes one-each to the
    largest clusters. Clusters smaller than their quota contribute everything
    and the deficit is re-drawn uniformly from the unsampled nodes.
    """
    n = x.shape[0]
    if s < 1:
        raise ValueError("sample size must be >= 1")
    if s > n:
        raise ValueError(f"cannot sample {s} of {n} nodes")
    rng = _as_generator(rng)
    if k is None:
        k = choose_k(x, rng, k_max=default_k_max(s))
    clustering = kmeans(x, k, rng)
    return quota_sample(clustering, s, rng)


def quota_sample(clustering: Clustering, s: int, rng) -> np.ndarray:
    """Equal-quota draw from an existing clustering (see cluster_sample)."""
    rng = _as_generator(rng)
    k = clustering.k
    sizes = np.bincount(clustering.assignment, minlength=k)
    quotas = np.full(k, s // k, dtype=np.int64)
    remainder = s % k
    if remainder:
        by_size = np.lexsort((np.arange(k), -sizes))
        quotas[by_size[:remainder]] += 1

    chosen: list[np.ndarray] = []
    for c in range(k):
        members = clustering.members(c)
        take = min(int(quotas[c]), members.size)
        if take == members.size:
            chosen.append(members)
        elif take > 0:
            chosen.append(rng.choice(members, size=take, replace=False))
    picked = np.concatenate(chosen) if chosen else np.zeros(0, dtype=np.int64)

    deficit = s - picked.size
    if deficit > 0:
        pool = np.setdiff1d(np.arange(len(clustering.assignment)), picked)
        picked = np.concatenate([picked, rng.choice(pool, size=deficit, replace=False)])
    return np.sort(picked.astype(np.int64))
