"""k-shell decomposition, H-index, and degree-weighted extended coreness."""

from __future__ import annotations

import numpy as np

from .graph import Graph

__all__ = ["k_shell", "h_index", "h_indices", "extended_coreness", "core_table"]


def k_shell(g: Graph) -> np.ndarray:
    """Shell index of every node via iterative minimum-degree pruning.

    Bucket-queue implementation, O(n + m); equivalent to repeatedly removing
    all nodes of the current minimum residual degree and assigning them that
    degree as their shell. Isolated nodes get shell 0.
    """
    n = g.n
    deg = g.degrees().astype(np.int64).copy()
    if n == 0:
        return deg

    max_deg = int(deg.max())
    # vert holds nodes sorted by current degree; pos/bin_start index into it
    bin_start = np.zeros(max_deg + 2, dtype=np.int64)
    counts = np.bincount(deg, minlength=max_deg + 1)
    bin_start[1:] = np.cumsum(counts)
    start = bin_start[:-1].copy()
    vert = np.argsort(deg, kind="stable").astype(np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[vert] = np.arange(n)

    indptr, indices = g.indptr, g.indices
    core = deg.copy()
    for i in range(n):
        v = vert[i]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if core[u] > core[v]:
                # move u one bucket down: swap with the first node of its bucket
                du = core[u]
                pu = pos[u]
                pw = start[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                start[du] += 1
                core[u] -= 1
    return core


def h_index(g: Graph, u: int) -> int:
    """Largest h such that at least h neighbours of u have degree >= h."""
    nd = np.sort(g.degrees()[g.neighbors(u)])[::-1]
    h = 0
    for i, d in enumerate(nd):
        if d >= i + 1:
            h = i + 1
        else:
            break
    return h


def h_indices(g: Graph) -> np.ndarray:
    return np.array([h_index(g, u) for u in range(g.n)], dtype=np.int64)


def extended_coreness(g: Graph, ks: np.ndarray | None = None) -> np.ndarray:
    """eks(v) = ks(v)*deg(v) + sum over neighbours u of ks(u)*deg(u).

    ``ks`` may be passed to reuse an existing k_shell result; it must have
    been computed on the same graph.
    """
    if ks is None:
        ks = k_shell(g)
    deg = g.degrees()
    w = ks.astype(np.float64) * deg
    rows = np.repeat(np.arange(g.n), deg)
    neighbour_sum = np.bincount(rows, weights=w[g.indices], minlength=g.n)
    return w + neighbour_sum


def core_table(g: Graph) -> list[tuple[str, int, int, int, float]]:
    """Per-node (label, degree, ks, h_index, eks) rows for CSV export."""
    ks = k_shell(g)
    eks = extended_coreness(g, ks)
    deg = g.degrees()
    hs = h_indices(g)
    return [
        (g.labels[u], int(deg[u]), int(ks[u]), int(hs[u]), float(eks[u]))
        for u in range(g.n)
    ]
