"""Numpy implementations of the hot kernels.

Same signatures and integer results as the compiled ``_kernels`` module; used
when the extension is not built or ``MW_PURE_PYTHON`` is set.
"""
import numpy as np


def _primes_below(limit):
    if limit < 3:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def linear_sieve(limit):
    """Moebius values on [0, limit) and the primes below limit.

    Vectorized Eratosthenes-style sieve: numpy cannot express the linear
    sieve's per-element inner loop without dropping to Python speed.
    """
    primes = _primes_below(limit)
    if limit <= 1:
        return np.zeros(limit, dtype=np.int8), primes
    small = primes[primes * primes < limit]
    return mobius_block(0, limit, small), primes


def mobius_block(lo, hi, primes):
    """Moebius values on [lo, hi); ``primes`` must cover every prime up to sqrt(hi)."""
    size = hi - lo
    mu = np.ones(size, dtype=np.int8)
    prod = np.ones(size, dtype=np.int64)
    for p in np.asarray(primes, dtype=np.int64).tolist():
        p2 = p * p
        if p2 >= hi:
            break
        start = (-lo) % p
        mu[start::p] *= -1
        prod[start::p] *= p
        mu[(-lo) % p2 :: p2] = 0
    big = prod != np.arange(lo, hi, dtype=np.int64)
    mu[big] *= -1
    if lo == 0 and size > 0:
        mu[0] = 0
    return mu


def fwht_inplace(a):
    """Unnormalized Walsh-Hadamard butterfly, natural (bit-mask) order, in place."""
    size = a.shape[0]
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = x - v[:, 1, :]
        h *= 2


def popcounts(size):
    return np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(np.uint8)


def level_sums(coeffs, n):
    levels = popcounts(coeffs.shape[0])
    sq = coeffs * coeffs
    out = np.zeros(n + 1, dtype=np.int64)
    for k in range(n + 1):
        out[k] = sq[levels == k].sum()
    return out


def xor_convolve(f, kernel):
    """out[x] = mean over y of f[x ^ y] * kernel[y]  (quadratic cost)."""
    size = f.shape[0]
    idx = np.arange(size)
    out = np.empty(size, dtype=np.float64)
    rows = max(1, (1 << 22) // size)
    for start in range(0, size, rows):
        xs = np.arange(start, min(size, start + rows))
        out[start : start + xs.size] = f[xs[:, None] ^ idx[None, :]] @ kernel
    return out / size
