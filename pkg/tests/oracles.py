"""Independent reference implementations used only by the tests."""
from __future__ import annotations

import math


def mu_simple(limit: int) -> list[int]:
    """Plain Eratosthenes-style Moebius list on [0, limit), mu(0) = 0."""
    mu = [1] * limit
    if limit:
        mu[0] = 0
    composite = [False] * limit
    for p in range(2, limit):
        if composite[p]:
            continue
        for k in range(2 * p, limit, p):
            composite[k] = True
        for k in range(p, limit, p):
            mu[k] = -mu[k]
        for k in range(p * p, limit, p * p):
            mu[k] = 0
    return mu


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n == 1:
        return 1
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return all(D % (p * p) for p in range(2, math.isqrt(abs(D)) + 1))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(m % (p * p) for p in range(2, math.isqrt(abs(m)) + 1))
    return False


def walsh_naive(A: int, x: int) -> int:
    out = 1
    j = 0
    while A >> j:
        if A >> j & 1 and x >> j & 1:
            out = -out
        j += 1
    return out
