# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled monomial kernels.

Both kernels build a per-coordinate power table once and then walk the
monomial list; every monomial is reduced sequentially over the nodes, so
the result does not depend on the thread count.
Moments are batched by exponent prefix, as in the numpy fallback.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
cimport openmp

cnp.import_array()


cdef double[:, :, ::1] _power_table(const double[:, ::1] pts, Py_ssize_t maxdeg):
    cdef Py_ssize_t n = pts.shape[0], dim = pts.shape[1]
    cdef Py_ssize_t i, e, j
    table = np.empty((dim, maxdeg + 1, n), dtype=np.float64)
    cdef double[:, :, ::1] P = table
    for i in range(dim):
        for j in range(n):
            P[i, 0, j] = 1.0
        for e in range(1, maxdeg + 1):
            for j in range(n):
                P[i, e, j] = P[i, e - 1, j] * pts[j, i]
    return P


def monomial_moments(points, weights, exponents):
    """Return ``sum_j w_j * prod_i x_ji ** a_mi`` for every exponent row ``a_m``.

    Monomials are grouped by their leading ``dim - 1`` exponents. Each group
    forms the weighted prefix product once in a per-thread buffer and then
    takes one dot product per last-coordinate exponent.
    """
    pts_arr = np.ascontiguousarray(points, dtype=np.float64)
    ex_arr = np.ascontiguousarray(exponents, dtype=np.int64)
    cdef const double[:, ::1] pts = pts_arr
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], dim = pts.shape[1], m = ex_arr.shape[0]
    if ex_arr.ndim != 2 or ex_arr.shape[1] != dim:
        raise ValueError("exponent width does not match point dimension")
    if w.shape[0] != n:
        raise ValueError("weights and points disagree in length")
    out = np.zeros(m, dtype=np.float64)
    if m == 0 or n == 0:
        return out
    cdef Py_ssize_t maxdeg = int(ex_arr.max())
    cdef double[:, :, ::1] P = _power_table(pts, maxdeg)

    # group rows by prefix; order[start[g]:start[g+1]] are the rows of group g
    order_arr = np.lexsort(ex_arr.T[::-1]).astype(np.int64)
    srt = ex_arr[order_arr, :-1]
    brk = np.flatnonzero(np.any(srt[1:] != srt[:-1], axis=1)) + 1
    start_arr = np.concatenate(([0], brk, [m])).astype(np.int64)
    cdef const long[::1] order = order_arr
    cdef const long[::1] start = start_arr
    cdef const long[:, ::1] ex = ex_arr
    cdef Py_ssize_t ngroups = start_arr.shape[0] - 1
    cdef int nthreads = openmp.omp_get_max_threads()
    cdef double[:, ::1] buf = np.empty((nthreads, n), dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t g, r, row, j, i, e, last = dim - 1
    cdef int tid
    cdef double acc
    for g in prange(ngroups, nogil=True, schedule="dynamic"):
        tid = openmp.omp_get_thread_num()
        row = order[start[g]]
        for j in range(n):
            buf[tid, j] = w[j]
        for i in range(last):
            e = ex[row, i]
            if e:
                for j in range(n):
                    buf[tid, j] = buf[tid, j] * P[i, e, j]
        for r in range(start[g], start[g + 1]):
            row = order[r]
            e = ex[row, last]
            acc = 0.0
            for j in range(n):
                acc = acc + P[last, e, j] * buf[tid, j]
            res[row] = acc
    return out


def poly_eval(points, exponents, coefficients):
    """Evaluate ``sum_m c_m * x ** a_m`` at every row of ``points``."""
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef const long[:, ::1] ex = np.ascontiguousarray(exponents, dtype=np.int64)
    cdef const double[::1] c = np.ascontiguousarray(coefficients, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], dim = pts.shape[1], m = ex.shape[0]
    if m and ex.shape[1] != dim:
        raise ValueError("exponent width does not match point dimension")
    out = np.zeros(n, dtype=np.float64)
    if m == 0 or n == 0:
        return out
    cdef Py_ssize_t maxdeg = int(np.max(exponents))
    cdef double[:, :, ::1] P = _power_table(pts, maxdeg)
    cdef double[::1] res = out
    cdef Py_ssize_t k, j, i
    cdef double acc, term
    for j in prange(n, nogil=True, schedule="static"):
        acc = 0.0
        for k in range(m):
            term = c[k]
            for i in range(dim):
                term = term * P[i, ex[k, i], j]
            acc = acc + term
        res[j] = acc
    return out
