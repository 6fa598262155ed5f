"""Moebius sieving and small multiplicative-function helpers."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CapacityError, DomainError

MAX_EXPONENT = 30
LINEAR_LIMIT = 1 << 24
SEGMENT_SIZE = 1 << 22


@dataclass(frozen=True, eq=False)
class MoebiusTable:
    """mu(x) for x in [0, 2**n), with the sentinel mu(0) = 0."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (1 << self.n,):
            raise ValueError("table length must be 2**n")
        self.values.flags.writeable = False

    @property
    def N(self) -> int:
        return 1 << self.n

    def __len__(self):
        return self.N

    def __getitem__(self, x):
        return self.values[x]

    def __eq__(self, other):
        if not isinstance(other, MoebiusTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def mertens(self) -> int:
        """M(N - 1) = sum of mu over the table."""
        return int(self.values.sum(dtype=np.int64))

    def squarefree_count(self) -> int:
        return int(np.count_nonzero(self.values))


@dataclass(frozen=True)
class FactorSummary:
    x: int
    prime_powers: tuple
    phi: int
    omega: int
    squarefree: bool

    @property
    def mu(self) -> int:
        return (-1) ** self.omega if self.squarefree else 0


def mobius_upto(limit: int, *, threads: int = 1, backend: str | None = None) -> np.ndarray:
    """int8 array of mu(x) for 0 <= x < limit.

    Linear sieve for [0, min(limit, 2**24)); above that, segments of 2**22
    sieved against the base primes, optionally on several threads.
    """
    k = _backend.get_backend(backend)
    head = min(limit, LINEAR_LIMIT)
    mu_head, primes = k.linear_sieve(head)
    if limit <= head:
        return mu_head
    out = np.empty(limit, dtype=np.int8)
    out[:head] = mu_head
    base = primes[primes <= math.isqrt(limit - 1)].astype(np.int64)
    bounds = [(lo, min(lo + SEGMENT_SIZE, limit)) for lo in range(head, limit, SEGMENT_SIZE)]

    def work(span):
        lo, hi = span
        out[lo:hi] = k.mobius_block(lo, hi, base)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, bounds))
    else:
        for span in bounds:
            work(span)
    return out


def sieve_moebius(n: int, *, max_exponent: int = MAX_EXPONENT, threads: int = 1,
                  backend: str | None = None) -> MoebiusTable:
    if not 1 <= n <= max_exponent:
        raise CapacityError(f"sieve exponent n={n} outside supported range 1..{max_exponent}")
    return MoebiusTable(n, mobius_upto(1 << n, threads=threads, backend=backend))


def factorize(x: int) -> list[tuple[int, int]]:
    """Trial-division factorization of a positive integer."""
    if x < 1:
        raise DomainError(f"factorization needs x >= 1, got {x}")
    out = []
    p = 2
    while p * p <= x:
        if x % p == 0:
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if x > 1:
        out.append((x, 1))
    return out


def mu_point(x: int) -> int:
    if x == 0:
        raise DomainError("mu(0) is undefined; the tables use the sentinel 0")
    fac = factorize(x)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def factor_toolkit(x: int) -> FactorSummary:
    fac = factorize(x)
    phi = 1
    for p, e in fac:
        phi *= (p - 1) * p ** (e - 1)
    return FactorSummary(
        x=x,
        prime_powers=tuple(fac),
        phi=phi,
        omega=len(fac),
        squarefree=all(e == 1 for _, e in fac),
    )


def euler_phi(x: int) -> int:
    return factor_toolkit(x).phi


def divisors(x: int) -> list[int]:
    divs = [1]
    for p, e in factorize(x):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
