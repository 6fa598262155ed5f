"""Monotone Boolean functions in +-1 form and their correlation with other tables.

TRUE is encoded as -1 and FALSE as +1, so the dictator on bit j is exactly
w_{{j}} and monotone means: raising an input bit never raises the output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ContractError, ParameterError
from .walsh import _as_table, _exponent, fwht, level_profile

MAX_ARITY = 24
MONOTONE_CHECK_LIMIT = 20


def is_monotone(table) -> bool:
    """Exhaustive neighbour test: t[x | 2**j] <= t[x] for every x and bit j."""
    t = np.asarray(table)
    n = _exponent(t.shape[0])
    if n > MONOTONE_CHECK_LIMIT:
        raise CapacityError(f"monotonicity check limited to n <= {MONOTONE_CHECK_LIMIT}")
    for j in range(n):
        v = t.reshape(-1, 2, 1 << j)
        if np.any(v[:, 1, :] > v[:, 0, :]):
            return False
    return True


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    n: int
    table: np.ndarray
    monotone: bool

    @classmethod
    def from_table(cls, table) -> "BooleanFunction":
        t = np.asarray(table, dtype=np.int8)
        n = _exponent(t.shape[0])
        if not np.all(np.abs(t) == 1):
            raise ParameterError("Boolean tables take values in {-1, +1}")
        return cls(n, t, is_monotone(t) if n <= MONOTONE_CHECK_LIMIT else False)

    @classmethod
    def from_truth(cls, truth) -> "BooleanFunction":
        return cls.from_table(np.where(np.asarray(truth, dtype=bool), -1, 1))

    def truth(self) -> np.ndarray:
        return self.table == -1

    def __and__(self, other):
        return BooleanFunction.from_truth(self.truth() & other.truth())

    def __or__(self, other):
        return BooleanFunction.from_truth(self.truth() | other.truth())


def monotone_generate(kind: str, n: int, *, j: int = 0, w: int = 2) -> BooleanFunction:
    """kind in {majority, dictator, and, or, tribes}; `j` selects the dictator
    bit and `w` the tribe width (tribes are the OR of ANDs over consecutive
    blocks of w bits, the last block possibly shorter)."""
    if not 1 <= n <= MAX_ARITY:
        raise ParameterError(f"arity n={n} outside 1..{MAX_ARITY}")
    x = np.arange(1 << n, dtype=np.uint32)
    ones = np.bitwise_count(x)
    if kind == "majority":
        if n % 2 == 0:
            raise ParameterError("majority needs odd n")
        truth = ones > n // 2
    elif kind == "dictator":
        if not 0 <= j < n:
            raise ParameterError(f"dictator bit {j} outside 0..{n - 1}")
        truth = (x >> j) & 1 == 1
    elif kind == "and":
        truth = ones == n
    elif kind == "or":
        truth = ones > 0
    elif kind == "tribes":
        if not 1 <= w <= n:
            raise ParameterError(f"tribe width {w} outside 1..{n}")
        truth = np.zeros(1 << n, dtype=bool)
        for lo in range(0, n, w):
            block = ((1 << min(w, n - lo)) - 1) << lo
            truth |= (x & block) == block
    else:
        raise ParameterError(f"unknown monotone family {kind!r}")
    return BooleanFunction.from_truth(truth)


def _values(f) -> np.ndarray:
    return f.table if isinstance(f, BooleanFunction) else np.asarray(_as_table(f))


def _int_dot(a: np.ndarray, b: np.ndarray) -> int:
    bound = int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * a.size
    if bound < 2**62:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return sum(x * y for x, y in zip(a.tolist(), b.tolist()))


def correlate(f, g, *, check: bool = True) -> Fraction:
    """(1/N) sum_x f(x) g(x), exact; with `check` the spectral pairing must agree."""
    fv, gv = _values(f), _values(g)
    if fv.shape != gv.shape:
        raise ParameterError(f"length mismatch {fv.shape[0]} vs {gv.shape[0]}")
    N = fv.shape[0]
    _exponent(N)
    value = Fraction(_int_dot(fv, gv), N)
    if check and value != spectral_pairing(fv, gv):
        raise ContractError("direct and spectral correlations disagree")
    return value


def spectral_pairing(f, g) -> Fraction:
    """sum_A f^(A) g^(A) from the exact integer spectra."""
    F, G = fwht(_values(f)), fwht(_values(g))
    return Fraction(_int_dot(F.coeffs, G.coeffs), F.N**2)


def spectral_concentration(g: BooleanFunction, level: int) -> Fraction:
    """Tail mass sum_{|A| > level} g^(A)**2; levels at or above n give 0."""
    if level < 0:
        raise ParameterError(f"level {level} must be non-negative")
    prof = level_profile(fwht(g.table))
    return prof.total() - prof.up_to(min(level, g.n))


@dataclass(frozen=True)
class CorrelationSplit:
    """corr(f, g) = low_part + high_part with |high_part| <= tail_bound."""

    correlation: Fraction
    low_part: Fraction
    high_part: Fraction
    tail_bound: float
    g_tail_mass: Fraction
    f_mass: Fraction
    level: int

    @property
    def holds(self) -> bool:
        # |high|**2 <= g_tail * f_mass, compared exactly
        return self.high_part**2 <= self.g_tail_mass * self.f_mass

    def as_dict(self) -> dict:
        return {
            "correlation": self.correlation,
            "low_part": self.low_part,
            "high_part": self.high_part,
            "tail_bound": self.tail_bound,
            "g_tail_mass": self.g_tail_mass,
            "f_mass": self.f_mass,
            "level": self.level,
            "holds": self.holds,
        }


def correlation_split(f, g: BooleanFunction, level: int) -> CorrelationSplit:
    """Split the correlation at `level`; the part above is bounded by Cauchy-Schwarz
    with the tail mass of g and the total mass of f."""
    fv = _values(f)
    if fv.shape != g.table.shape:
        raise ParameterError("f and g must have equal length")
    if not 0 <= level <= g.n:
        raise ParameterError(f"level {level} outside 0..{g.n}")
    F, G = fwht(fv), fwht(g.table)
    N2 = F.N**2
    levels = np.bitwise_count(np.arange(F.N, dtype=np.uint64))
    low = levels <= level
    low_sum = _int_dot(F.coeffs[low], G.coeffs[low])
    high_sum = _int_dot(F.coeffs[~low], G.coeffs[~low])
    g_tail = spectral_concentration(g, level)
    f_mass = level_profile(F).total()
    return CorrelationSplit(
        correlation=Fraction(low_sum + high_sum, N2),
        low_part=Fraction(low_sum, N2),
        high_part=Fraction(high_sum, N2),
        tail_bound=math.sqrt(g_tail) * math.sqrt(f_mass),
        g_tail_mass=g_tail,
        f_mass=f_mass,
        level=level,
    )


def bt_level(n: int, c: float = 4.0) -> int:
    """The concentration level ceil(c sqrt(n)), capped at n."""
    return min(n, math.ceil(c * math.sqrt(n)))
