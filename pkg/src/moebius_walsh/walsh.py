"""Walsh functions, the exact integer Walsh-Hadamard transform and level masses.

Subsets A of {0, ..., n-1} are plain ints used as bit masks: bit j set means
j in A.  With x = sum x_j 2**j the Walsh function is
w_A(x) = prod_{j in A} (1 - 2 x_j) = (-1)**popcount(A & x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _backend
from .arith import MoebiusTable
from .errors import CapacityError, ParameterError

def mask(indices) -> int:
    """Bit mask of an iterable of coordinate indices."""
    out = 0
    for j in indices:
        out |= 1 << j
    return out


def walsh_eval(A: int, x: int) -> int:
    return -1 if (A & x).bit_count() & 1 else 1


def walsh_table(A: int, n: int) -> np.ndarray:
    """w_A on [0, 2**n) as int8."""
    x = np.arange(1 << n, dtype=np.uint64)
    return (1 - 2 * (np.bitwise_count(x & np.uint64(A)) & 1)).astype(np.int8)


def popcounts(n: int) -> np.ndarray:
    return _backend.kernels.popcounts(1 << n)


def _as_table(table) -> np.ndarray:
    if isinstance(table, MoebiusTable):
        return table.values
    return np.asarray(table)


def _exponent(size: int) -> int:
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise ParameterError(f"table length {size} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """coeffs[A] = N * f^(A) = sum_x f(x) w_A(x), exact int64."""

    n: int
    coeffs: np.ndarray

    @property
    def N(self) -> int:
        return 1 << self.n

    def __eq__(self, other):
        if not isinstance(other, WalshSpectrum):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    def coefficient(self, A: int) -> Fraction:
        """The normalized coefficient f^(A)."""
        return Fraction(int(self.coeffs[A]), self.N)

    def max_abs_coefficient(self) -> Fraction:
        return Fraction(int(np.abs(self.coeffs).max()), self.N)


@dataclass(frozen=True)
class LevelProfile:
    """W_k = numerators[k] / N**2, k = 0..n."""

    n: int
    numerators: tuple

    @property
    def denominator(self) -> int:
        return 1 << (2 * self.n)

    @property
    def masses(self) -> list[Fraction]:
        return [Fraction(num, self.denominator) for num in self.numerators]

    @property
    def floats(self) -> list[float]:
        return [num / self.denominator for num in self.numerators]

    def total(self) -> Fraction:
        return Fraction(sum(self.numerators), self.denominator)

    def up_to(self, n0: int) -> Fraction:
        return Fraction(sum(self.numerators[: n0 + 1]), self.denominator)

    def to_csv(self) -> str:
        rows = ["level,mass_num,mass_den,mass_float"]
        den = self.denominator
        for k, num in enumerate(self.numerators):
            rows.append(f"{k},{num},{den},{num / den:.17g}")
        return "\n".join(rows) + "\n"


def fwht(table, *, backend: str | None = None) -> WalshSpectrum:
    """Exact unnormalized transform of an integer table of length 2**n."""
    values = _as_table(table)
    n = _exponent(values.shape[0])
    if not np.issubdtype(values.dtype, np.integer):
        as_int = np.rint(values)
        if not np.array_equal(as_int, values):
            raise ParameterError("fwht needs an integer-valued table; use real_transform")
        values = as_int
    peak = int(np.abs(values).max(initial=0))
    if peak and peak.bit_length() + n > 63:
        raise CapacityError(f"|entries| up to {peak} overflow int64 after {n} butterfly stages "
                            f"(limit 2**{63 - n})")
    work = np.ascontiguousarray(values, dtype=np.int64).copy()
    _backend.get_backend(backend).fwht_inplace(work)
    return WalshSpectrum(n, work)


def real_transform(table, *, backend: str | None = None) -> np.ndarray:
    """Unnormalized transform of a real table (float64)."""
    work = np.array(table, dtype=np.float64, copy=True)
    _exponent(work.shape[0])
    _backend.get_backend(backend).fwht_inplace(work)
    return work


def inverse_transform(coeffs, *, backend: str | None = None) -> np.ndarray:
    """f(x) = (1/N) sum_A coeffs[A] w_A(x) for unnormalized coefficients."""
    out = real_transform(coeffs, backend=backend)
    return out / out.shape[0]


def naive_coefficient(table, A: int) -> int:
    values = _as_table(table)
    n = _exponent(values.shape[0])
    if A >> n:
        raise ParameterError(f"mask {A:#x} has bits beyond n={n}")
    return int(np.dot(values.astype(np.int64), walsh_table(A, n).astype(np.int64)))


def level_profile(spectrum: WalshSpectrum) -> LevelProfile:
    c = spectrum.coeffs
    peak = int(np.abs(c).max(initial=0))
    if 2 * peak.bit_length() + spectrum.n < 63:
        sums = _backend.kernels.level_sums(np.ascontiguousarray(c, dtype=np.int64), spectrum.n)
        return LevelProfile(spectrum.n, tuple(int(s) for s in sums))
    levels = popcounts(spectrum.n)
    return LevelProfile(spectrum.n, tuple(square_sum(c[levels == k]) for k in range(spectrum.n + 1)))


def low_level_mass(spectrum: WalshSpectrum, n0: int) -> Fraction:
    """sum over |A| <= n0 of f^(A)**2."""
    if not 0 <= n0 <= spectrum.n:
        raise ParameterError(f"level cutoff n0={n0} outside 0..{spectrum.n}")
    return level_profile(spectrum).up_to(n0)


def low_degree_truncate(spectrum: WalshSpectrum, cutoff: int) -> np.ndarray:
    if not 0 <= cutoff <= spectrum.n:
        raise ParameterError(f"cutoff {cutoff} outside 0..{spectrum.n}")
    kept = np.where(popcounts(spectrum.n) <= cutoff, spectrum.coeffs, 0)
    return inverse_transform(kept)


def interval_mask(J) -> int:
    start, stop = J
    return ((1 << stop) - 1) ^ ((1 << start) - 1)


@dataclass(frozen=True)
class CapResult:
    table: np.ndarray
    discarded_mass: Fraction


def interval_cap(spectrum: WalshSpectrum, J, K0: int) -> CapResult:
    """Keep the masks with |A & J| < K0; J is a half-open index range (start, stop)."""
    start, stop = J
    if not 0 <= start < stop <= spectrum.n:
        raise ParameterError(f"interval {J} not inside [0, {spectrum.n})")
    if K0 < 1:
        raise ParameterError("cap K0 must be >= 1")
    hits = _hits(spectrum.n, J)
    capped = hits >= K0
    c = spectrum.coeffs
    discarded = square_sum(c[capped])
    table = inverse_transform(np.where(capped, 0, c))
    return CapResult(table, Fraction(discarded, spectrum.N**2))


def square_sum(values: np.ndarray) -> int:
    """Exact sum of squares of an integer array."""
    if values.size == 0:
        return 0
    peak = int(np.abs(values).max())
    if 2 * peak.bit_length() + values.size.bit_length() < 63:
        v = values.astype(np.int64)
        return int(np.dot(v, v))
    return sum(int(v) ** 2 for v in values.tolist())


def _hits(n: int, J) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.uint64)
    return np.bitwise_count(idx & np.uint64(interval_mask(J)))


def partition_intervals(n: int, m: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + m, n)) for lo in range(0, n, m)]


@dataclass(frozen=True)
class IntervalChoice:
    alpha: int
    interval: tuple
    capped_mass: Fraction
    candidates: dict
    threshold: float
    meets_threshold: bool
    averaging_estimate: float


def select_good_interval(spectrum: WalshSpectrum, m: int, K0: int, K: float, n0: int) -> IntervalChoice:
    """Among the blocks J_alpha = [alpha*m, (alpha+1)*m) with n/(4m) <= alpha <= n/(2m),
    return the one carrying the least capped mass sum_{|A & J| >= K0} f^(A)**2.

    ``threshold`` is exp(-2K) (normalized so that the total mass is at most 1);
    ``averaging_estimate`` is K*n0*m/(K0*n), the pigeonhole bound for the
    best block.
    """
    n = spectrum.n
    if m < 1 or K0 < 1:
        raise ParameterError("block length m and cap K0 must be positive")
    blocks = partition_intervals(n, m)
    lo = math.ceil(n / (4 * m))
    hi = math.floor(n / (2 * m))
    admissible = [a for a in range(lo, hi + 1) if a < len(blocks)]
    if not admissible:
        raise ParameterError(f"no admissible block for n={n}, m={m}: range n/4m..n/2m is empty")
    masses = {}
    for a in admissible:
        capped = _hits(n, blocks[a]) >= K0
        masses[a] = Fraction(square_sum(spectrum.coeffs[capped]), spectrum.N**2)
    best = min(admissible, key=lambda a: (masses[a], a))
    threshold = math.exp(-2 * K)
    return IntervalChoice(
        alpha=best,
        interval=blocks[best],
        capped_mass=masses[best],
        candidates=masses,
        threshold=threshold,
        meets_threshold=float(masses[best]) <= threshold,
        averaging_estimate=K * n0 * m / (K0 * n),
    )
