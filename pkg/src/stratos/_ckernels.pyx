# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled strategy-product kernels over uint64 word bitsets.

Same contracts as ``stratos._pykernels``; factors arrive packed as a
``(n_factors, max_options, n_words)`` array with per-factor option counts.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, NAN

ctypedef cnp.uint64_t u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline bint inside(const u64[::1] a, const u64[::1] good, Py_ssize_t nw) nogil:
    cdef Py_ssize_t w
    for w in range(nw):
        if a[w] & ~good[w]:
            return False
    return True


def first_forcing(const u64[:, :, ::1] fac, const cnp.int64_t[::1] radix,
                  const u64[::1] base, const u64[::1] good):
    cdef Py_ssize_t n = fac.shape[0]
    cdef Py_ssize_t nw = base.shape[0]
    cdef Py_ssize_t d, w, k
    idx_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = idx_arr
    partial_arr = np.zeros((n + 1, nw), dtype=np.uint64)
    cdef u64[:, ::1] partial = partial_arr
    for k in range(n):
        if radix[k] == 0:
            return None
    for w in range(nw):
        partial[0, w] = base[w]
    d = 0
    with nogil:
        while True:
            if inside(partial[d], good, nw):
                for k in range(d, n):
                    idx[k] = 0
                break
            if d == n:
                d -= 1
                while d >= 0:
                    idx[d] += 1
                    if idx[d] < radix[d]:
                        break
                    idx[d] = 0
                    d -= 1
                if d < 0:
                    break
            for w in range(nw):
                partial[d + 1, w] = partial[d, w] & fac[d, idx[d], w]
            d += 1
    if d < 0:
        return None
    return tuple(idx_arr.tolist())


def scan(const u64[:, :, ::1] fac, const cnp.int64_t[::1] radix,
         const u64[::1] base, const u64[::1] good,
         const double[::1] weights, const double[::1] utils):
    cdef Py_ssize_t n = fac.shape[0]
    cdef Py_ssize_t nw = base.shape[0]
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t k, d, w, start, pos, bit, i
    cdef u64 word, g
    cdef double mass, gmass, usum, umin, umax, wt, ut
    for k in range(n):
        total *= radix[k]
    forcing = np.zeros(total, dtype=bool)
    mass_a = np.zeros(total)
    gmass_a = np.zeros(total)
    umin_a = np.zeros(total)
    umax_a = np.zeros(total)
    usum_a = np.zeros(total)
    if total == 0:
        return {"forcing": forcing, "mass": mass_a, "good_mass": gmass_a,
                "umin": umin_a, "umax": umax_a, "usum": usum_a}
    cdef cnp.uint8_t[::1] f_v = forcing.view(np.uint8)
    cdef double[::1] m_v = mass_a, gm_v = gmass_a, mn_v = umin_a, mx_v = umax_a, us_v = usum_a
    idx_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = idx_arr
    partial_arr = np.zeros((n + 1, nw), dtype=np.uint64)
    cdef u64[:, ::1] partial = partial_arr
    cdef bint empty, forces
    for w in range(nw):
        partial[0, w] = base[w]
    start = 0
    pos = 0
    with nogil:
        while True:
            for d in range(start, n):
                for w in range(nw):
                    partial[d + 1, w] = partial[d, w] & fac[d, idx[d], w]
            mass = 0.0
            gmass = 0.0
            usum = 0.0
            umin = INFINITY
            umax = -INFINITY
            empty = True
            forces = True
            for w in range(nw):
                word = partial[n, w]
                g = good[w]
                if word & ~g:
                    forces = False
                while word:
                    bit = __builtin_ctzll(word)
                    word &= word - 1
                    i = w * 64 + bit
                    empty = False
                    wt = weights[i]
                    ut = utils[i]
                    mass += wt
                    usum += wt * ut
                    if (g >> bit) & 1:
                        gmass += wt
                    if ut < umin:
                        umin = ut
                    if ut > umax:
                        umax = ut
            if empty:
                umin = NAN
                umax = NAN
            f_v[pos] = forces
            m_v[pos] = mass
            gm_v[pos] = gmass
            mn_v[pos] = umin
            mx_v[pos] = umax
            us_v[pos] = usum
            pos += 1
            k = n - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < radix[k]:
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                break
            start = k
    return {"forcing": forcing, "mass": mass_a, "good_mass": gmass_a,
            "umin": umin_a, "umax": umax_a, "usum": usum_a}
