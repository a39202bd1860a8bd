# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contracts as ``_pykernels``."""

from math import comb

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, NAN

cnp.import_array()

NAME = "cython"


def statistics_matrix(const cnp.int64_t[:, ::1] counts, const double[::1] probs,
                      const double[::1] cum, Py_ssize_t n):
    cdef Py_ssize_t r = counts.shape[0], k = counts.shape[1]
    out_arr = np.zeros((r, 6), dtype=np.float64)
    zbuf = np.empty(k, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] z = zbuf
    cdef Py_ssize_t row, i
    cdef double e, d, acc, chi, ks, nks, z_bar, cvm, wat, ad, dz, nn = <double>n
    cdef bint bad_chi = False
    for i in range(k):
        if probs[i] <= 0.0:
            bad_chi = True
    with nogil:
        for row in range(r):
            chi = 0.0
            ks = 0.0
            nks = 0.0
            acc = 0.0
            for i in range(k):
                e = nn * probs[i]
                d = counts[row, i] - e
                if e > 0.0:
                    chi = chi + d * d / e
                nks = nks + fabs(d)
                acc = acc + d
                z[i] = acc
                if fabs(acc) > ks:
                    ks = fabs(acc)
            z_bar = 0.0
            for i in range(k):
                z_bar = z_bar + z[i] * probs[i]
            cvm = 0.0
            wat = 0.0
            ad = 0.0
            for i in range(k):
                cvm = cvm + z[i] * z[i] * probs[i]
                dz = z[i] - z_bar
                wat = wat + dz * dz * probs[i]
                if i < k - 1:
                    ad = ad + z[i] * z[i] * probs[i] / (cum[i] * (1.0 - cum[i]))
            if n > 0:
                cvm = cvm / nn
                wat = wat / nn
                ad = ad / nn
            else:
                cvm = NAN
                wat = NAN
                ad = NAN
            if bad_chi:
                chi = NAN
                ad = NAN
            out[row, 0] = chi
            out[row, 1] = ks
            out[row, 2] = cvm
            out[row, 3] = wat
            out[row, 4] = ad
            out[row, 5] = 0.5 * nks
    return out_arr


def compositions(Py_ssize_t n, Py_ssize_t k):
    cdef Py_ssize_t m = comb(n + k - 1, k - 1)
    out_arr = np.zeros((m, k), dtype=np.int64)
    buf = np.zeros(k, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef cnp.int64_t[::1] c = buf
    cdef Py_ssize_t row, i, j
    cdef cnp.int64_t s
    c[k - 1] = n
    with nogil:
        for row in range(m):
            for i in range(k):
                out[row, i] = c[i]
            if row == m - 1:
                break
            # advance to the lexicographic successor
            s = 0
            j = k - 2
            while j >= 0:
                s = s + c[j + 1]
                if s > 0:
                    break
                j = j - 1
            c[j] = c[j] + 1
            for i in range(j + 1, k):
                c[i] = 0
            c[k - 1] = s - 1
    return out_arr
