"""Ranking-quality metrics: Kendall tau-b, Jaccard@k, monotonicity, rank histogram."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ranking import Ranking

__all__ = [
    "kendall_tau",
    "jaccard_at_k",
    "monotonicity",
    "rank_distribution",
    "EvalReport",
    "evaluate",
]


def _tie_term(arr: np.ndarray) -> int:
    """sum over tie groups of t*(t-1)/2."""
    counts = np.unique(arr, return_counts=True)[1]
    return int((counts * (counts - 1) // 2).sum())


def _merge_count_discordant(y: np.ndarray) -> int:
    """Inversions of y via bottom-up merge sort (y pre-sorted by the first key)."""
    y = y.copy()
    holder = np.empty_like(y)
    n = len(y)
    discordant = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if y[j] < y[i]:
                    holder[k] = y[j]
                    j += 1
                    discordant += mid - i
                else:
                    holder[k] = y[i]
                    i += 1
                k += 1
            while i < mid:
                holder[k] = y[i]
                i += 1
                k += 1
            while j < hi:
                holder[k] = y[j]
                j += 1
                k += 1
        y, holder = holder, y
        width *= 2
    return discordant


def kendall_tau(scores_a, scores_b) -> float:
    """Tie-corrected Kendall tau-b between two per-node score arrays.

    O(n log n) via Knight's merge-sort algorithm. Returns NaN when either
    side is all-tied (tau-b is undefined there, not 0).
    """
    a = np.asarray(scores_a, dtype=np.float64)
    b = np.asarray(scores_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("score arrays must be 1-D and aligned")
    n = len(a)
    if n < 2:
        raise ValueError("kendall_tau requires at least 2 nodes")

    # sort by a then b; discordance is then counted as inversions in b
    order = np.lexsort((b, a))
    a_s, b_s = a[order], b[order]

    n0 = n * (n - 1) // 2
    n1 = _tie_term(a)
    n2 = _tie_term(b)
    if n1 == n0 or n2 == n0:
        return float("nan")
    n3 = _tie_term(a + 1j * b)  # joint ties: same a and same b

    discordant = _merge_count_discordant(b_s)
    numerator = n0 - n1 - n2 + n3 - 2 * discordant
    return numerator / math.sqrt((n0 - n1) * (n0 - n2))


def jaccard_at_k(r: Ranking, gtr: Ranking, k: int) -> float:
    """Jaccard coefficient of the two top-k node sets."""
    top_r = r.top_k(k)
    top_g = gtr.top_k(k)
    union = top_r | top_g
    return len(top_r & top_g) / len(union)


def monotonicity(r: Ranking) -> float:
    """Tie-scarcity of a ranking: (1 - sum_r n_r(n_r-1) / (n(n-1)))^2.

    n_r are tie-group sizes under exact score equality; 1.0 when all scores
    are distinct, 0.0 when all are equal.
    """
    n = len(r)
    if n < 2:
        raise ValueError("monotonicity requires at least 2 nodes")
    tied = 2 * _tie_term(r.scores)  # n_r*(n_r-1) summed over groups
    return (1.0 - tied / (n * (n - 1))) ** 2


def rank_distribution(r: Ranking, bin_width: int) -> list[tuple[int, int]]:
    """(bin_start, count) histogram of dense tie-shared ranks.

    Bins cover [1, bin_width], [bin_width+1, 2*bin_width], ... and counts sum
    to the number of nodes.
    """
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    ranks = r.dense_ranks()
    n_bins = (int(ranks.max()) - 1) // bin_width + 1
    counts = np.bincount((ranks - 1) // bin_width, minlength=n_bins)
    return [(int(i * bin_width + 1), int(c)) for i, c in enumerate(counts)]


@dataclass
class EvalReport:
    """Bundle of ranking-quality metrics for one method against ground truth."""

    method_name: str
    kendall_tau: float
    jaccard_at: dict[int, float]
    monotonicity: float
    runtime_seconds: float = float("nan")
    rank_histogram: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        tau = self.kendall_tau
        return {
            "method_name": self.method_name,
            "kendall_tau": None if math.isnan(tau) else tau,
            "jaccard_at": {str(k): v for k, v in sorted(self.jaccard_at.items())},
            "monotonicity": self.monotonicity,
            "runtime_seconds": None
            if math.isnan(self.runtime_seconds)
            else self.runtime_seconds,
            "rank_histogram": self.rank_histogram,
        }


def evaluate(
    r: Ranking,
    gtr: Ranking,
    ks: tuple[int, ...] = (10, 20, 50),
    bin_width: int = 10,
    runtime_seconds: float = float("nan"),
) -> EvalReport:
    """Score ranking ``r`` against ground truth ``gtr`` on all metrics."""
    if len(r) != len(gtr):
        raise ValueError("rankings must cover the same node set")
    tau = kendall_tau(r.score_by_node(), gtr.score_by_node())
    jac = {int(k): jaccard_at_k(r, gtr, int(k)) for k in ks if 1 <= k <= len(r)}
    return EvalReport(
        method_name=r.method_name,
        kendall_tau=tau,
        jaccard_at=jac,
        monotonicity=monotonicity(r),
        runtime_seconds=runtime_seconds,
        rank_histogram=rank_distribution(r, bin_width),
    )
