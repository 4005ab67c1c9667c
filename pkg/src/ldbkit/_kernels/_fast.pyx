# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-identical twins of ``_ref`` (same accumulation
order, compiled with -ffp-contract=off)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def wpt_level(const double[:, ::1] x, const double[::1] lo, const double[::1] hi):
    cdef Py_ssize_t rows = x.shape[0]
    cdef Py_ssize_t nb = x.shape[1]
    cdef Py_ssize_t half = nb // 2
    cdef Py_ssize_t taps = lo.shape[0]
    out_lo_arr = np.empty((rows, half), dtype=np.float64)
    out_hi_arr = np.empty((rows, half), dtype=np.float64)
    cdef double[:, ::1] out_lo = out_lo_arr
    cdef double[:, ::1] out_hi = out_hi_arr
    cdef Py_ssize_t r, t, i, j
    cdef double acc_lo, acc_hi, v
    for r in range(rows):
        for t in range(half):
            acc_lo = 0.0
            acc_hi = 0.0
            j = 2 * t
            for i in range(taps):
                v = x[r, j]
                acc_lo = acc_lo + lo[i] * v
                acc_hi = acc_hi + hi[i] * v
                j += 1
                if j == nb:
                    j = 0
            out_lo[r, t] = acc_lo
            out_hi[r, t] = acc_hi
    return out_lo_arr, out_hi_arr


cdef inline bint _point_inside(const double* p, Py_ssize_t stride,
                               const double[::1] lo, const double[::1] hi,
                               const unsigned char[::1] hi_closed,
                               Py_ssize_t k) nogil:
    cdef Py_ssize_t a
    cdef double c
    for a in range(k):
        c = p[a]
        if c < lo[a]:
            return 0
        if hi_closed[a]:
            if c > hi[a]:
                return 0
        elif c >= hi[a]:
            return 0
    return 1


def cube_mask(const double[:, ::1] pts, const unsigned char[::1] alive,
              const double[::1] lo, const double[::1] hi,
              const unsigned char[::1] hi_closed):
    cdef Py_ssize_t m = pts.shape[0]
    cdef Py_ssize_t k = lo.shape[0]
    out_arr = np.zeros(m, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t r
    for r in range(m):
        if alive[r] and _point_inside(&pts[r, 0], pts.shape[1], lo, hi,
                                      hi_closed, k):
            out[r] = 1
    return out_arr


cdef void _split_counts_one(const double[:, ::1] pts,
                            const unsigned char[::1] alive,
                            const double[::1] lo, const double[::1] hi,
                            const double[::1] mid,
                            const unsigned char[::1] hi_closed,
                            Py_ssize_t k, long long[::1] counts):
    cdef Py_ssize_t m = pts.shape[0]
    cdef Py_ssize_t r, a
    cdef long long bucket
    for r in range(m):
        if not alive[r]:
            continue
        if not _point_inside(&pts[r, 0], pts.shape[1], lo, hi, hi_closed, k):
            continue
        bucket = 0
        for a in range(k):
            if pts[r, a] >= mid[a]:
                bucket |= 1 << a
        counts[bucket] += 1


def split_counts(const double[:, ::1] pts_a, const unsigned char[::1] alive_a,
                 const double[:, ::1] pts_b, const unsigned char[::1] alive_b,
                 const double[::1] lo, const double[::1] hi,
                 const unsigned char[::1] hi_closed):
    cdef Py_ssize_t k = lo.shape[0]
    mid_arr = 0.5 * (np.asarray(lo) + np.asarray(hi))
    cdef double[::1] mid = mid_arr
    counts_a_arr = np.zeros(1 << k, dtype=np.int64)
    counts_b_arr = np.zeros(1 << k, dtype=np.int64)
    cdef long long[::1] counts_a = counts_a_arr
    cdef long long[::1] counts_b = counts_b_arr
    _split_counts_one(pts_a, alive_a, lo, hi, mid, hi_closed, k, counts_a)
    _split_counts_one(pts_b, alive_b, lo, hi, mid, hi_closed, k, counts_b)
    return counts_a_arr, counts_b_arr
