"""Per-node sparse feature vectors blending neighbour degree and coreness.

A node's feature vector is |V|-dimensional but nonzero only at its
neighbours: entry v holds alpha1*degree(v) + alpha2*eks(v) for v adjacent to
the node. Dense storage would be quadratic in |V|, so vectors are kept as
sorted (index, value) pairs and the full matrix as CSR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .decomposition import extended_coreness
from .graph import Graph

__all__ = [
    "SparseFeatureVector",
    "FeatureMatrix",
    "degree_vector",
    "coreness_vector",
    "feature_vector",
    "feature_matrix",
]


@dataclass(frozen=True)
class SparseFeatureVector:
    """Sparse |V|-dimensional vector as sorted (index, value) pairs."""

    dim: int
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int32))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must align")
        if np.any(np.diff(self.indices) <= 0):
            raise ValueError("indices must be strictly increasing")
        if self.indices.size and (self.indices[0] < 0 or self.indices[-1] >= self.dim):
            raise ValueError("index out of range")

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def norm_sq(self) -> float:
        return float(self.values @ self.values)

    def dot(self, other: "SparseFeatureVector") -> float:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        _, ia, ib = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        return float(self.values[ia] @ other.values[ib])

    def sq_dist(self, other: "SparseFeatureVector") -> float:
        d2 = self.norm_sq() + other.norm_sq() - 2.0 * self.dot(other)
        return max(d2, 0.0)


class FeatureMatrix:
    """All feature vectors of a graph, sharing one CSR structure."""

    def __init__(self, dim: int, indptr: np.ndarray, indices: np.ndarray, values: np.ndarray):
        self.dim = dim
        self.indptr = indptr
        self.indices = indices
        self.values = values

    def __len__(self) -> int:
        return len(self.indptr) - 1

    def row(self, u: int) -> SparseFeatureVector:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return SparseFeatureVector(self.dim, self.indices[lo:hi], self.values[lo:hi])

    def rows(self) -> list[SparseFeatureVector]:
        return [self.row(u) for u in range(len(self))]

    def to_csr(self) -> sparse.csr_matrix:
        return sparse.csr_matrix(
            (self.values, self.indices, self.indptr), shape=(len(self), self.dim)
        )


def degree_vector(g: Graph) -> np.ndarray:
    return g.degrees().astype(np.float64)


def coreness_vector(g: Graph) -> np.ndarray:
    """Extended coreness of every node (see decomposition.extended_coreness)."""
    return extended_coreness(g)


def _check_alphas(alpha1: float, alpha2: float) -> None:
    if alpha1 < 0 or alpha2 < 0 or (alpha1 == 0 and alpha2 == 0):
        raise ValueError("alpha1, alpha2 must be >= 0 and not both zero")


def feature_vector(
    g: Graph, u: int, alpha1: float = 1.0, alpha2: float = 1.0
) -> SparseFeatureVector:
    """Feature vector of ``u``: neighbour entries of alpha1*deg + alpha2*eks."""
    _check_alphas(alpha1, alpha2)
    g._check(u)
    w = alpha1 * degree_vector(g) + alpha2 * coreness_vector(g)
    nbrs = g.neighbors(u)
    return SparseFeatureVector(g.n, nbrs, w[nbrs])


def feature_matrix(g: Graph, alpha1: float = 1.0, alpha2: float = 1.0) -> FeatureMatrix:
    """Feature vectors for all nodes, reusing one degree and one eks pass."""
    _check_alphas(alpha1, alpha2)
    w = alpha1 * degree_vector(g) + alpha2 * coreness_vector(g)
    return FeatureMatrix(g.n, g.indptr, g.indices, w[g.indices])
