"""Classic centralities used as comparison points for the learned ranking."""

from __future__ import annotations

import numpy as np

from .decomposition import extended_coreness, h_indices, k_shell
from .graph import Graph

__all__ = [
    "degree_centrality",
    "ks_centrality",
    "h_index_centrality",
    "local_h_index",
    "local_rank",
    "cnc",
    "extended_kshell_sum",
    "link_significance",
    "ds_centrality",
    "STATIC_BASELINES",
]


def _neighbour_sum(g: Graph, values: np.ndarray) -> np.ndarray:
    """out[u] = sum of values over u's neighbours."""
    rows = np.repeat(np.arange(g.n), g.degrees())
    return np.bincount(rows, weights=values[g.indices], minlength=g.n)


def degree_centrality(g: Graph) -> np.ndarray:
    return g.degrees().astype(np.float64)


def ks_centrality(g: Graph) -> np.ndarray:
    return k_shell(g).astype(np.float64)


def h_index_centrality(g: Graph) -> np.ndarray:
    return h_indices(g).astype(np.float64)


def local_h_index(g: Graph) -> np.ndarray:
    """LH(u) = H(u) + sum of H over u's neighbours."""
    h = h_indices(g).astype(np.float64)
    return h + _neighbour_sum(g, h)


def _two_hop_counts(g: Graph) -> np.ndarray:
    """N(w): number of distinct nodes at distance 1 or 2 from w."""
    out = np.zeros(g.n, dtype=np.int64)
    seen = np.full(g.n, -1, dtype=np.int64)
    for w in range(g.n):
        count = 0
        seen[w] = w
        for v in g.neighbors(w):
            if seen[v] != w:
                seen[v] = w
                count += 1
            for x in g.neighbors(v):
                if seen[x] != w:
                    seen[x] = w
                    count += 1
        out[w] = count
    return out


def local_rank(g: Graph) -> np.ndarray:
    """C_L(u) = sum over v in G(u) of sum over w in G(v) of N(w)."""
    n_two_hop = _two_hop_counts(g).astype(np.float64)
    inner = _neighbour_sum(g, n_two_hop)
    return _neighbour_sum(g, inner)


def cnc(g: Graph) -> np.ndarray:
    """Coreness of the neighbourhood: sum of neighbour k-shell scores."""
    return _neighbour_sum(g, k_shell(g).astype(np.float64))


def extended_kshell_sum(g: Graph) -> np.ndarray:
    """Sum of k-shell scores over all nodes within 2 hops (each once)."""
    ks = k_shell(g).astype(np.float64)
    out = np.zeros(g.n)
    seen = np.full(g.n, -1, dtype=np.int64)
    for u in range(g.n):
        total = 0.0
        seen[u] = u
        for v in g.neighbors(u):
            if seen[v] != u:
                seen[v] = u
                total += ks[v]
            for x in g.neighbors(v):
                if seen[x] != u:
                    seen[x] = u
                    total += ks[x]
        out[u] = total
    return out


def link_significance(g: Graph) -> np.ndarray:
    """I(u) = sum over neighbours v of (1 - jaccard(G(u), G(v))) * ks(v)."""
    ks = k_shell(g).astype(np.float64)
    out = np.zeros(g.n)
    neighbour_sets = [set(g.neighbors(u).tolist()) for u in range(g.n)]
    for u in range(g.n):
        nu = neighbour_sets[u]
        total = 0.0
        for v in g.neighbors(u):
            nv = neighbour_sets[v]
            union = len(nu | nv)
            ls = 1.0 - len(nu & nv) / union if union else 1.0
            total += ls * ks[v]
        out[u] = total
    return out


def ds_centrality(g: Graph, beta: float, t: int = 5) -> np.ndarray:
    """Row sums of the truncated spreading series beta*A + ... + beta^t * A^t.

    Computed with t sparse matrix-vector products against the all-ones
    vector: A^i is never materialized.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    v = np.ones(g.n)
    out = np.zeros(g.n)
    scale = 1.0
    for _ in range(t):
        v = _neighbour_sum(g, v)  # v <- A v
        scale *= beta
        out += scale * v
    return out


# static baselines: rankings independent of the diffusion parameters
STATIC_BASELINES = {
    "degree": degree_centrality,
    "ks": ks_centrality,
    "hindex": h_index_centrality,
    "lh": local_h_index,
    "localrank": local_rank,
    "cnc": cnc,
    "eks-sum": extended_kshell_sum,
    "ls": link_significance,
}
