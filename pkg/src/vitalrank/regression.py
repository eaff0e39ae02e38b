"""Epsilon-insensitive support vector regression with an RBF kernel.

The kernel similarity is exp(-||x - x'||^2 / (m * sigma^2)) with m the
feature dimension. Training solves the soft-margin dual in the net
coefficients w_i = alpha_i - alpha_i^* (one per training point):

    maximize  -1/2 w^T K w + y^T w - epsilon * sum|w_i|
    subject to  sum w_i = 0,   -C <= w_i <= C

by two-coordinate ascent on maximally KKT-violating pairs. The hard-margin
program is the C -> infinity limit. Training sets here are tiny (a fraction
of a percent of the graph), so the kernel matrix is materialized densely.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .features import FeatureMatrix, SparseFeatureVector

__all__ = [
    "RbfKernel",
    "SvrModel",
    "rbf",
    "train_svr",
    "predict",
    "predict_batch",
    "median_sigma",
    "SupportVectorRegressor",
    "KnnRegressor",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class RbfKernel:
    """Gaussian similarity with dimension-scaled bandwidth."""

    sigma: float
    dim: int

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    def from_sq_dist(self, d2):
        return np.exp(-np.asarray(d2) / (self.dim * self.sigma**2))


def rbf(kernel: RbfKernel, x: SparseFeatureVector, x2: SparseFeatureVector) -> float:
    if x.dim != kernel.dim or x2.dim != kernel.dim:
        raise ValueError("dimension mismatch")
    return float(kernel.from_sq_dist(x.sq_dist(x2)))


def _as_csr(vectors) -> sparse.csr_matrix:
    if isinstance(vectors, sparse.csr_matrix):
        return vectors
    if sparse.issparse(vectors):
        return vectors.tocsr()
    if isinstance(vectors, FeatureMatrix):
        return vectors.to_csr()
    if isinstance(vectors, SparseFeatureVector):
        vectors = [vectors]
    rows = list(vectors)
    if not rows:
        raise ValueError("no vectors given")
    dim = rows[0].dim
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    for i, r in enumerate(rows):
        if r.dim != dim:
            raise ValueError("dimension mismatch among vectors")
        indptr[i + 1] = indptr[i] + len(r.indices)
    indices = np.concatenate([r.indices for r in rows]) if rows else np.zeros(0)
    values = np.concatenate([r.values for r in rows]) if rows else np.zeros(0)
    return sparse.csr_matrix((values, indices, indptr), shape=(len(rows), dim))


def _sq_dists(a: sparse.csr_matrix, b: sparse.csr_matrix) -> np.ndarray:
    na = np.asarray(a.multiply(a).sum(axis=1)).ravel()
    nb = np.asarray(b.multiply(b).sum(axis=1)).ravel()
    d2 = na[:, None] + nb[None, :] - 2.0 * (a @ b.T).toarray()
    return np.maximum(d2, 0.0)


def median_sigma(vectors) -> float:
    """Median-heuristic bandwidth: m*sigma^2 = median pairwise squared distance."""
    x = _as_csr(vectors)
    d2 = _sq_dists(x, x)
    off = d2[np.triu_indices(d2.shape[0], k=1)]
    med = float(np.median(off)) if off.size else 0.0
    if med <= 0:
        return 1.0
    return math.sqrt(med / x.shape[1])


@dataclass
class SvrModel:
    """Trained SVR: support vectors, net dual coefficients, and bias.

    Invariants after training: sum(coefficients) == 0 exactly and every
    |coefficient| <= C (the dual box). Prediction is
    sum_i w_i * rbf(x, sv_i) + bias.
    """

    support_vectors: sparse.csr_matrix
    coefficients: np.ndarray
    bias: float
    kernel: RbfKernel
    epsilon: float
    cost: float
    kkt_residual: float = float("nan")
    iterations: int = 0

    @property
    def dim(self) -> int:
        return self.kernel.dim


def _solve_pair(beta_i, beta_j, gi, gj, eta, eps, lo, hi):
    """Best step delta in [lo, hi] for the pair subproblem.

    phi(delta) = -eta/2 * delta^2 + (gi - gj) * delta
                 - eps*(|beta_i + delta| - |beta_i|)
                 - eps*(|beta_j - delta| - |beta_j|)
    Concave and piecewise quadratic with kinks where either coefficient
    crosses zero; the maximum is found by checking every smooth segment.
    """

    def phi(d):
        return (
            -0.5 * eta * d * d
            + (gi - gj) * d
            - eps * (abs(beta_i + d) - abs(beta_i))
            - eps * (abs(beta_j - d) - abs(beta_j))
        )

    points = [lo, hi]
    for kink in (-beta_i, beta_j):
        if lo < kink < hi:
            points.append(kink)
    points = sorted(set(points))
    candidates = list(points)
    for a, b in zip(points[:-1], points[1:]):
        mid = 0.5 * (a + b)
        s1 = 1.0 if beta_i + mid >= 0 else -1.0
        s2 = 1.0 if beta_j - mid >= 0 else -1.0
        slope0 = (gi - gj) - eps * s1 + eps * s2
        if eta > 0:
            candidates.append(min(max(slope0 / eta, a), b))
    best = max(candidates, key=phi)
    return best, phi(best)


def _fix_equality_sum(beta: np.ndarray, cost: float) -> None:
    """Repair rounding drift so that fsum(beta) == 0.0 exactly."""
    for _ in range(16):
        s = math.fsum(beta)
        if s == 0.0:
            return
        k = int(np.argmax(np.minimum(cost - beta, beta + cost)))
        beta[k] = min(max(beta[k] - s, -cost), cost)
    warnings.warn("could not zero the dual equality constraint exactly")


def _smo(K: np.ndarray, y: np.ndarray, cost: float, eps: float, tol: float, max_iter: int):
    n = len(y)
    beta = np.zeros(n)
    f = np.zeros(n)  # f = K beta
    it = 0
    while it < max_iter:
        g = y - f
        rup = np.where(beta >= 0, g - eps, g + eps)
        ldn = np.where(beta <= 0, g + eps, g - eps)
        rup_masked = np.where(beta < cost, rup, -np.inf)
        ldn_masked = np.where(beta > -cost, ldn, np.inf)
        i = int(np.argmax(rup_masked))
        j = int(np.argmin(ldn_masked))
        violation = rup_masked[i] - ldn_masked[j]
        if violation <= tol or i == j:
            break
        lo = max(-cost - beta[i], beta[j] - cost)
        hi = min(cost - beta[i], beta[j] + cost)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        delta, gain = _solve_pair(beta[i], beta[j], g[i], g[j], eta, eps, lo, hi)
        if gain <= 0.0 or delta == 0.0:
            break  # numerically stuck; KKT residual is reported to the caller
        beta[i] = min(max(beta[i] + delta, -cost), cost)
        beta[j] = min(max(beta[j] - delta, -cost), cost)
        f += delta * (K[:, i] - K[:, j])
        it += 1
    else:
        warnings.warn(f"SMO hit the iteration cap ({max_iter}) before tolerance")

    _fix_equality_sum(beta, cost)
    f = K @ beta
    g = y - f
    rup = np.where(beta >= 0, g - eps, g + eps)
    ldn = np.where(beta <= 0, g + eps, g - eps)
    rup_max = np.max(np.where(beta < cost, rup, -np.inf))
    ldn_min = np.min(np.where(beta > -cost, ldn, np.inf))
    bias = 0.5 * (rup_max + ldn_min)
    residual = max(0.0, rup_max - ldn_min)
    return beta, float(bias), float(residual), it


def train_svr(
    samples,
    targets=None,
    *,
    C: float = 10.0,
    epsilon: float | None = None,
    sigma: float | None = None,
    tol: float = 1e-8,
    max_iter: int = 200_000,
) -> SvrModel:
    """Fit an RBF-kernel epsilon-SVR.

    ``samples`` is either a sequence of (vector, target) pairs or a vector
    collection with ``targets`` given separately. Defaults: sigma from the
    median heuristic, epsilon = 1% of the target range.
    """
    if targets is None:
        pairs = list(samples)
        vectors = [p[0] for p in pairs]
        y = np.array([p[1] for p in pairs], dtype=np.float64)
    else:
        vectors = samples
        y = np.asarray(targets, dtype=np.float64)
    x = _as_csr(vectors)
    if x.shape[0] != len(y):
        raise ValueError("vectors and targets must align")
    if len(y) < 1:
        raise ValueError("need at least one training sample")
    if not np.all(np.isfinite(y)):
        raise ValueError("targets must be finite")
    if C <= 0:
        raise ValueError("C must be positive")

    if sigma is None:
        sigma = median_sigma(x)
    if epsilon is None:
        epsilon = 0.01 * float(y.max() - y.min())
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")

    kernel = RbfKernel(sigma=sigma, dim=x.shape[1])
    K = kernel.from_sq_dist(_sq_dists(x, x))
    beta, bias, residual, iters = _smo(K, y, C, epsilon, tol, max_iter)
    return SvrModel(
        support_vectors=x,
        coefficients=beta,
        bias=bias,
        kernel=kernel,
        epsilon=float(epsilon),
        cost=float(C),
        kkt_residual=residual,
        iterations=iters,
    )


def predict_batch(model: SvrModel, vectors) -> np.ndarray:
    x = _as_csr(vectors)
    if x.shape[1] != model.dim:
        raise ValueError(f"dimension mismatch: {x.shape[1]} != {model.dim}")
    K = model.kernel.from_sq_dist(_sq_dists(x, model.support_vectors))
    return K @ model.coefficients + model.bias


def predict(model: SvrModel, x: SparseFeatureVector) -> float:
    return float(predict_batch(model, [x])[0])


def dual_objective(model: SvrModel, y: np.ndarray) -> float:
    """Dual objective value of the trained coefficients (for diagnostics)."""
    K = model.kernel.from_sq_dist(_sq_dists(model.support_vectors, model.support_vectors))
    w = model.coefficients
    return float(-0.5 * w @ K @ w + y @ w - model.epsilon * np.abs(w).sum())


def model_to_json(model: SvrModel) -> str:
    sv = model.support_vectors.tocsr()
    return json.dumps(
        {
            "dim": model.dim,
            "sigma": model.kernel.sigma,
            "epsilon": model.epsilon,
            "cost": model.cost,
            "bias": model.bias,
            "coefficients": model.coefficients.tolist(),
            "sv_indptr": sv.indptr.tolist(),
            "sv_indices": sv.indices.tolist(),
            "sv_values": sv.data.tolist(),
            "kkt_residual": model.kkt_residual,
            "iterations": model.iterations,
        }
    )


def model_from_json(text: str) -> SvrModel:
    d = json.loads(text)
    n = len(d["coefficients"])
    sv = sparse.csr_matrix(
        (d["sv_values"], d["sv_indices"], d["sv_indptr"]), shape=(n, d["dim"])
    )
    return SvrModel(
        support_vectors=sv,
        coefficients=np.array(d["coefficients"], dtype=np.float64),
        bias=float(d["bias"]),
        kernel=RbfKernel(sigma=float(d["sigma"]), dim=int(d["dim"])),
        epsilon=float(d["epsilon"]),
        cost=float(d["cost"]),
        kkt_residual=float(d["kkt_residual"]),
        iterations=int(d["iterations"]),
    )


class SupportVectorRegressor:
    """fit/predict wrapper so the pipeline can swap regressors."""

    def __init__(self, C: float = 10.0, epsilon: float | None = None, sigma: float | None = None):
        self.C = C
        self.epsilon = epsilon
        self.sigma = sigma
        self.model: SvrModel | None = None

    def fit(self, vectors, targets) -> "SupportVectorRegressor":
        self.model = train_svr(
            vectors, targets, C=self.C, epsilon=self.epsilon, sigma=self.sigma
        )
        return self

    def predict(self, vectors) -> np.ndarray:
        if self.model is None:
            raise RuntimeError("fit before predict")
        return predict_batch(self.model, vectors)


class KnnRegressor:
    """Mean target of the k nearest training vectors; sanity alternative to SVR."""

    def __init__(self, k: int = 3):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self._x: sparse.csr_matrix | None = None
        self._y: np.ndarray | None = None

    def fit(self, vectors, targets) -> "KnnRegressor":
        self._x = _as_csr(vectors)
        self._y = np.asarray(targets, dtype=np.float64)
        if not np.all(np.isfinite(self._y)):
            raise ValueError("targets must be finite")
        return self

    def predict(self, vectors) -> np.ndarray:
        if self._x is None:
            raise RuntimeError("fit before predict")
        d2 = _sq_dists(_as_csr(vectors), self._x)
        k = min(self.k, self._x.shape[0])
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return self._y[nearest].mean(axis=1)
