# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: Moebius sieving, the Walsh-Hadamard butterfly, level sums
and the dyadic (XOR) convolution.

Every function here has a numpy twin in ``_pure`` with the same signature and
bit-identical integer results.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

cnp.import_array()

ctypedef fused real_t:
    int64_t
    double

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil


def linear_sieve(Py_ssize_t limit):
    """Moebius values on [0, limit) and the primes below limit (linear sieve)."""
    mu_arr = np.zeros(limit, dtype=np.int8)
    if limit <= 1:
        return mu_arr, np.zeros(0, dtype=np.int64)
    comp_arr = np.zeros(limit, dtype=np.uint8)
    primes_arr = np.empty(max(16, limit // 4 + 16), dtype=np.int64)
    cdef int8_t[::1] mu = mu_arr
    cdef cnp.uint8_t[::1] comp = comp_arr
    cdef int64_t[::1] primes = primes_arr
    cdef Py_ssize_t i, j, np_ = 0, ip
    cdef int64_t p
    with nogil:
        mu[1] = 1
        for i in range(2, limit):
            if not comp[i]:
                primes[np_] = i
                np_ += 1
                mu[i] = -1
            for j in range(np_):
                p = primes[j]
                ip = i * p
                if ip >= limit:
                    break
                comp[ip] = 1
                if i % p == 0:
                    mu[ip] = 0
                    break
                mu[ip] = -mu[i]
    return mu_arr, primes_arr[:np_].copy()


def mobius_block(int64_t lo, int64_t hi, int64_t[::1] primes):
    """Moebius values on [lo, hi); ``primes`` must cover every prime up to sqrt(hi)."""
    cdef Py_ssize_t size = hi - lo
    out = np.ones(size, dtype=np.int8)
    prod_arr = np.ones(size, dtype=np.int64)
    cdef int8_t[::1] mu = out
    cdef int64_t[::1] prod = prod_arr
    cdef Py_ssize_t k, i, nprimes = primes.shape[0]
    cdef int64_t p, p2, start
    with nogil:
        for k in range(nprimes):
            p = primes[k]
            p2 = p * p
            if p2 >= hi:
                break
            start = ((lo + p - 1) // p) * p
            i = start - lo
            while i < size:
                mu[i] = -mu[i]
                prod[i] *= p
                i += p
            start = ((lo + p2 - 1) // p2) * p2
            i = start - lo
            while i < size:
                mu[i] = 0
                i += p2
        for i in range(size):
            if mu[i] != 0 and prod[i] != lo + i:
                mu[i] = -mu[i]
        if lo == 0 and size > 0:
            mu[0] = 0
    return out


def fwht_inplace(real_t[::1] a):
    """Unnormalized Walsh-Hadamard butterfly, natural (bit-mask) order, in place."""
    cdef Py_ssize_t n = a.shape[0], h = 1, i, j
    cdef real_t x, y
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    x = a[j]
                    y = a[j + h]
                    a[j] = x + y
                    a[j + h] = x - y
                i += 2 * h
            h *= 2


def level_sums(int64_t[::1] coeffs, int n):
    """Sum of coeffs[A]**2 grouped by popcount(A); caller guarantees no overflow."""
    out = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] acc = out
    cdef Py_ssize_t i, size = coeffs.shape[0]
    cdef int64_t c
    with nogil:
        for i in range(size):
            c = coeffs[i]
            acc[popcount64(<unsigned long long>i)] += c * c
    return out


def popcounts(Py_ssize_t size):
    out = np.empty(size, dtype=np.uint8)
    cdef cnp.uint8_t[::1] pc = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(size):
            pc[i] = popcount64(<unsigned long long>i)
    return out


def xor_convolve(double[::1] f, double[::1] kernel):
    """out[x] = mean over y of f[x ^ y] * kernel[y]  (quadratic cost)."""
    cdef Py_ssize_t n = f.shape[0], x, y
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s
    with nogil:
        for x in range(n):
            s = 0.0
            for y in range(n):
                s += f[x ^ y] * kernel[y]
            o[x] = s / n
    return out
