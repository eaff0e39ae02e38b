# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled SIR kernel; draw-for-draw identical to ``_sir_py``.

See the module docstring of ``_sir_py`` for the RNG contract and the round
semantics. Any change here must be mirrored there.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #include <stdint.h>

    static inline uint64_t vr_mix64(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static inline uint64_t vr_next_u64(uint64_t *s) {
        *s += 0x9E3779B97F4A7C15ULL;
        return vr_mix64(*s);
    }

    static inline double vr_next_double(uint64_t *s) {
        return (vr_next_u64(s) >> 11) * (1.0 / 9007199254740992.0);
    }

    static inline uint64_t vr_run_seed(uint64_t master, uint64_t node, uint64_t run) {
        return vr_mix64(master + (node + 1) * 0x9E3779B97F4A7C15ULL
                               + (run + 1) * 0xC2B2AE3D27D4EB4FULL);
    }
    """
    ctypedef unsigned long long uint64_t
    uint64_t vr_mix64(uint64_t z) nogil
    uint64_t vr_next_u64(uint64_t *s) nogil
    double vr_next_double(uint64_t *s) nogil
    uint64_t vr_run_seed(uint64_t master, uint64_t node, uint64_t run) nogil

HAVE_COMPILED = True


cdef inline long long _sir_run(const long long *indptr, const int *indices,
                               unsigned char *status, int *cur, int *nxt,
                               int *removed, int seed_node,
                               double beta, double mu, uint64_t *state) nogil:
    cdef long long n_removed = 0
    cdef int ncur = 1, nnxt, w, i, u, v
    cdef long long j
    status[seed_node] = 1
    cur[0] = seed_node
    while ncur > 0:
        nnxt = 0
        for i in range(ncur):
            u = cur[i]
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if status[v] == 0 and vr_next_double(state) < beta:
                    status[v] = 1
                    nxt[nnxt] = v
                    nnxt += 1
        w = 0
        for i in range(ncur):
            u = cur[i]
            if vr_next_double(state) < mu:
                status[u] = 2
                removed[n_removed] = u
                n_removed += 1
            else:
                cur[w] = u
                w += 1
        for i in range(nnxt):
            cur[w] = nxt[i]
            w += 1
        ncur = w
    for i in range(<int> n_removed):
        status[removed[i]] = 0
    return n_removed


def simulate_batch(cnp.ndarray[cnp.int64_t, ndim=1] indptr,
                   cnp.ndarray[cnp.int32_t, ndim=1] indices,
                   cnp.ndarray[cnp.int32_t, ndim=1] seed_nodes,
                   double beta, double mu, long long runs,
                   unsigned long long master_seed):
    """Influence sums and sums of squares over ``runs`` SIR runs per node."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t n_seeds = seed_nodes.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] status = np.zeros(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cur = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] nxt = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] removed = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sums = np.zeros(n_seeds, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sumsq = np.zeros(n_seeds, dtype=np.int64)

    cdef const long long *p_indptr = <const long long *> cnp.PyArray_DATA(indptr)
    cdef const int *p_indices = <const int *> cnp.PyArray_DATA(indices)
    cdef unsigned char *p_status = <unsigned char *> cnp.PyArray_DATA(status)
    cdef int *p_cur = <int *> cnp.PyArray_DATA(cur)
    cdef int *p_nxt = <int *> cnp.PyArray_DATA(nxt)
    cdef int *p_removed = <int *> cnp.PyArray_DATA(removed)

    cdef Py_ssize_t i
    cdef long long r, inf, total, total_sq
    cdef int node
    cdef uint64_t state

    with nogil:
        for i in range(n_seeds):
            node = seed_nodes[i]
            total = 0
            total_sq = 0
            for r in range(runs):
                state = vr_run_seed(master_seed, <uint64_t> node, <uint64_t> r)
                inf = _sir_run(p_indptr, p_indices, p_status, p_cur, p_nxt,
                               p_removed, node, beta, mu, &state)
                total += inf
                total_sq += inf * inf
            sums[i] = total
            sumsq[i] = total_sq
    return sums, sumsq
