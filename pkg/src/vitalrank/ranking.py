"""Score-ordered node rankings with deterministic tie-breaking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Ranking"]


@dataclass(frozen=True)
class Ranking:
    """Nodes ordered by non-increasing score; ties broken by node index.

    ``nodes[i]`` is the node at rank position i (0-based) and ``scores[i]``
    its score. Every node of the producing graph appears exactly once.
    """

    nodes: np.ndarray
    scores: np.ndarray
    method_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=np.int64))
        object.__setattr__(self, "scores", np.asarray(self.scores, dtype=np.float64))
        if self.nodes.shape != self.scores.shape:
            raise ValueError("nodes and scores must align")
        if np.any(np.diff(self.scores) > 0):
            raise ValueError("scores must be non-increasing along the ranking")

    @classmethod
    def from_scores(cls, scores: np.ndarray, method_name: str = "") -> "Ranking":
        """Rank all nodes of a per-node score array."""
        scores = np.asarray(scores, dtype=np.float64)
        if not np.all(np.isfinite(scores)):
            raise ValueError("scores must be finite")
        order = np.lexsort((np.arange(len(scores)), -scores))
        return cls(nodes=order, scores=scores[order], method_name=method_name)

    def __len__(self) -> int:
        return len(self.nodes)

    def score_by_node(self) -> np.ndarray:
        """Per-node score array indexed by node id."""
        out = np.empty(len(self.nodes), dtype=np.float64)
        out[self.nodes] = self.scores
        return out

    def top_k(self, k: int) -> set[int]:
        if not 1 <= k <= len(self.nodes):
            raise ValueError(f"k={k} out of range [1, {len(self.nodes)}]")
        return set(self.nodes[:k].tolist())

    def dense_ranks(self) -> np.ndarray:
        """Per-node dense rank (1-based; tied scores share a rank)."""
        distinct = np.concatenate([[True], np.diff(self.scores) != 0])
        ranks_in_order = np.cumsum(distinct)
        out = np.empty(len(self.nodes), dtype=np.int64)
        out[self.nodes] = ranks_in_order
        return out
