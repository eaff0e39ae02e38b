"""Pure-Python SIR kernel; the reference for the compiled twin.

Both kernels must consume the RNG stream draw-for-draw identically so that
results are bit-equal regardless of which one runs. The stream is splitmix64;
each (node, run) pair gets its own stream derived from the master seed, which
makes results independent of execution order and worker count.

Round semantics: every node infected before round t attempts each neighbour
that is still susceptible when the attempt happens, with probability beta,
in (frontier order, ascending neighbour order). A node already infected
earlier in the same round is skipped; each attempt is an independent
Bernoulli, so the outcome distribution is unchanged by the skip. After the
round's attempts, each previously infected node recovers with probability mu.
Nodes infected in round t act from round t+1 on.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
_GOLD = 0x9E3779B97F4A7C15
_NODE_SALT = 0x9E3779B97F4A7C15
_RUN_SALT = 0xC2B2AE3D27D4EB4F
_INV_2_53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """splitmix64 output finalizer."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def run_seed(master_seed: int, node: int, run: int) -> int:
    """Initial splitmix64 state for the (node, run) stream."""
    z = (master_seed + (node + 1) * _NODE_SALT + (run + 1) * _RUN_SALT) & MASK
    return mix64(z)


class SplitMix64:
    """Minimal splitmix64 stream; next_double() yields uniforms in [0, 1)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLD) & MASK
        return mix64(self.state)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * _INV_2_53


def sir_run(
    indptr: np.ndarray,
    indices: np.ndarray,
    status: np.ndarray,
    seed_node: int,
    beta: float,
    mu: float,
    rng: SplitMix64,
) -> int:
    """One SIR realization; returns the removed count at steady state.

    ``status`` is a scratch uint8 array of zeros; it is restored to zeros
    before returning.
    """
    status[seed_node] = 1
    cur = [seed_node]
    removed: list[int] = []
    while cur:
        nxt = []
        for u in cur:
            for v in indices[indptr[u] : indptr[u + 1]]:
                if status[v] == 0 and rng.next_double() < beta:
                    status[v] = 1
                    nxt.append(int(v))
        keep = []
        for u in cur:
            if rng.next_double() < mu:
                status[u] = 2
                removed.append(u)
            else:
                keep.append(u)
        cur = keep + nxt
    for u in removed:
        status[u] = 0
    return len(removed)


def simulate_batch(
    indptr: np.ndarray,
    indices: np.ndarray,
    seed_nodes: np.ndarray,
    beta: float,
    mu: float,
    runs: int,
    master_seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Influence sums and sums of squares over ``runs`` SIR runs per node."""
    n = len(indptr) - 1
    status = np.zeros(n, dtype=np.uint8)
    sums = np.zeros(len(seed_nodes), dtype=np.int64)
    sumsq = np.zeros(len(seed_nodes), dtype=np.int64)
    for i, node in enumerate(seed_nodes):
        node = int(node)
        total = 0
        total_sq = 0
        for r in range(runs):
            rng = SplitMix64(run_seed(master_seed, node, r))
            inf = sir_run(indptr, indices, status, node, beta, mu, rng)
            total += inf
            total_sq += inf * inf
        sums[i] = total
        sumsq[i] = total_sq
    return sums, sumsq
