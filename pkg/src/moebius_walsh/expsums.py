"""Exponential sums S_f(alpha) = sum_{x<N} f(x) e(alpha x), major/minor arcs, and the
band-limited replacement h0 of the square wave behind the Walsh functions.

e(t) = exp(2 pi i t) throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CapacityError, ContractError, ParameterError
from .walsh import _as_table, walsh_table

# measured once over n <= 12, |A| <= 4 and frozen: sum_r |a_r| <= (C n)**|A|
WALSH_FOURIER_CONSTANT = 1.0
# ||S_{w_A}||_1 <= C log N (C n)**|A| with this C, for n <= 12
WALSH_L1_CONSTANT = 1.0
# 2**(-m/2) ||w_A - w~_A||_2 <= C |A| 2**(-l/2)
WALSH_APPROX_CONSTANT = 4.0


def e(t):
    return np.exp(2j * np.pi * t)


def _phase_ladder(alpha, n: int) -> np.ndarray:
    """e(alpha * 2**j) for j < n, with the fractional parts taken exactly."""
    rungs = np.empty(n, dtype=np.complex128)
    for j in range(n):
        if isinstance(alpha, Fraction):
            frac = float((alpha * 2**j) % 1)
        else:
            frac = math.fmod(float(alpha) * 2.0**j, 1.0)
        rungs[j] = e(frac)
    return rungs


def phases(alpha, N: int) -> np.ndarray:
    """e(alpha x) for x in [0, N), multiplied out from the binary ladder."""
    n = max(1, (N - 1).bit_length())
    rungs = _phase_ladder(alpha, n)
    x = np.arange(N)
    out = np.ones(N, dtype=np.complex128)
    for j in range(n):
        bit = ((x >> j) & 1).astype(bool)
        out[bit] *= rungs[j]
    return out


def generating_sum(f, alpha) -> complex:
    values = _as_table(f)
    return complex(np.dot(values.astype(np.float64), phases(alpha, values.shape[0])))


def grid_sums(f, M: int | None = None) -> np.ndarray:
    """S_f(j/M) for j = 0..M-1 (zero-padded inverse FFT)."""
    values = np.asarray(_as_table(f), dtype=np.complex128)
    N = values.shape[0]
    M = N if M is None else M
    if M < N or M & (M - 1):
        raise ParameterError(f"grid size M={M} must be a power of two >= N={N}")
    padded = np.zeros(M, dtype=np.complex128)
    padded[:N] = values
    return np.fft.ifft(padded) * M


@dataclass(frozen=True)
class WalshFourierExpansion:
    """w_A(x) = sum_r coeffs[r] e(r x / 2**n)."""

    A: int
    n: int
    coeffs: np.ndarray
    l1: float
    calibrated_C: float | None

    def resynthesize(self) -> np.ndarray:
        return np.fft.ifft(self.coeffs) * (1 << self.n)

    def resynthesis_error(self) -> float:
        return float(np.abs(self.resynthesize() - walsh_table(self.A, self.n)).max())

    def within_bound(self, C: float = WALSH_FOURIER_CONSTANT) -> bool:
        k = self.A.bit_count()
        return self.l1 <= (C * self.n) ** k * (1 + 1e-12)


def walsh_fourier_expansion(A: int, n: int) -> WalshFourierExpansion:
    if n > 20:
        raise CapacityError("dense expansion limited to n <= 20")
    if A >> n:
        raise ParameterError(f"mask {A:#x} has bits beyond n={n}")
    coeffs = np.fft.fft(walsh_table(A, n).astype(np.float64)) / (1 << n)
    coeffs[np.abs(coeffs) < 1e-15] = 0.0
    l1 = float(np.abs(coeffs).sum())
    k = A.bit_count()
    calibrated = l1 ** (1 / k) / n if k else None
    return WalshFourierExpansion(A, n, coeffs, l1, calibrated)


@dataclass(frozen=True)
class L1Report:
    A: int
    n: int
    grid: int
    value: float
    refined_value: float
    relative_change: float
    bound: float
    constant: float


def s_walsh_l1_report(A: int, n: int, grid: int | None = None, *,
                      constant: float = WALSH_L1_CONSTANT, tolerance: float = 0.005,
                      max_grid: int = 1 << 22) -> L1Report:
    """Trapezoid value of ||S_{w_A}||_{L1(T)} with grid doubling until the change is < tolerance."""
    N = 1 << n
    grid = 8 * N if grid is None else grid
    if grid < 8 * N:
        raise ParameterError(f"grid {grid} must be at least 8N = {8 * N}")
    w = walsh_table(A, n)
    value = float(np.abs(grid_sums(w, grid)).mean())
    while True:
        refined = float(np.abs(grid_sums(w, 2 * grid)).mean())
        change = abs(refined - value) / value
        if change < tolerance or 2 * grid >= max_grid:
            break
        grid, value = 2 * grid, refined
    bound = constant * math.log(N) * (constant * n) ** A.bit_count()
    return L1Report(A, n, grid, value, refined, change, bound, constant)


@dataclass(frozen=True)
class MajorArc:
    """|alpha - a/q| < B/(qN)."""

    q: int
    a: int
    center: Fraction
    half_width: Fraction

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.center - self.half_width, self.center + self.half_width


@dataclass
class ArcSet:
    B: int
    N: int
    arcs: list
    overlaps: list = field(default_factory=list)
    total_measure: Fraction = Fraction(0)
    union_measure: Fraction = Fraction(0)

    def union(self) -> list[tuple[Fraction, Fraction]]:
        return circle_union(a.interval() for a in self.arcs)

    def to_csv(self) -> str:
        rows = ["q,a,center_num,center_den,half_width_num,half_width_den"]
        for arc in self.arcs:
            rows.append(f"{arc.q},{arc.a},{arc.center.numerator},{arc.center.denominator},"
                        f"{arc.half_width.numerator},{arc.half_width.denominator}")
        return "\n".join(rows) + "\n"


def circle_union(intervals) -> list[tuple[Fraction, Fraction]]:
    """Disjoint sorted pieces of [0, 1) covered by open intervals taken mod 1."""
    pieces = []
    for lo, hi in intervals:
        if hi - lo >= 1:
            return [(Fraction(0), Fraction(1))]
        shift = math.floor(lo)
        lo, hi = lo - shift, hi - shift
        if hi <= 1:
            pieces.append((lo, hi))
        else:
            pieces.append((lo, Fraction(1)))
            pieces.append((Fraction(0), hi - 1))
    pieces.sort()
    merged = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def major_arcs(B: int, N: int) -> ArcSet:
    if B < 2:
        raise ParameterError("arc cutoff B must be >= 2")
    arcs = [
        MajorArc(q, a, Fraction(a, q), Fraction(B, q * N))
        for q in range(1, B)
        for a in range(q)
        if gcd(a, q) == 1
    ]
    arcs.sort(key=lambda arc: (arc.center, arc.q))
    overlaps = []
    for i, left in enumerate(arcs):
        right = arcs[(i + 1) % len(arcs)]
        if right is left:
            continue
        gap = (right.center - left.center) % 1
        if gap < left.half_width + right.half_width:
            overlaps.append(((left.q, left.a), (right.q, right.a)))
    union = circle_union(a.interval() for a in arcs)
    return ArcSet(
        B=B, N=N, arcs=arcs, overlaps=overlaps,
        total_measure=sum((2 * a.half_width for a in arcs), Fraction(0)),
        union_measure=sum((hi - lo for lo, hi in union), Fraction(0)),
    )


def arc_indicator(arcs: ArcSet, M: int) -> np.ndarray:
    """True at grid nodes j/M lying inside some major arc (exact integer test)."""
    j = np.arange(M, dtype=object if M * arcs.B * arcs.N >= 2**62 else np.int64)
    inside = np.zeros(M, dtype=bool)
    for arc in arcs.arcs:
        period = arc.q * M
        d = (j * arc.q - arc.a * M) % period
        d = np.minimum(d, period - d)
        # |j/M - a/q| < B/(qN)  <=>  d * N < B * M
        inside |= np.asarray(d * arcs.N < arcs.B * M, dtype=bool)
    return inside


@dataclass(frozen=True)
class MinorArcReport:
    sup: float
    argmax: Fraction | None
    vinogradov_rhs: float
    ratio: float
    grid: int
    minor_fraction: float


def minor_arc_scan(f, B: int, grid: int | None = None) -> MinorArcReport:
    """sup |S_f| over grid nodes off the major arcs, against N (log N)**4 B**(-1/4) with C = 1."""
    values = _as_table(f)
    N = values.shape[0]
    grid = 8 * N if grid is None else grid
    if grid < 8 * N:
        raise ParameterError(f"grid {grid} must be at least 8N = {8 * N}")
    mags = np.abs(grid_sums(values, grid))
    off = ~arc_indicator(major_arcs(B, N), grid)
    rhs = N * math.log(N) ** 4 * B ** -0.25
    if not off.any():
        return MinorArcReport(0.0, None, rhs, 0.0, grid, 0.0)
    idx = int(np.argmax(np.where(off, mags, -1.0)))
    sup = float(mags[idx])
    return MinorArcReport(sup, Fraction(idx, grid), rhs, sup / rhs, grid, float(off.mean()))


@dataclass(frozen=True)
class ArcInnerProduct:
    value: complex
    full_circle: complex
    share: float
    intervals: list


def arc_inner_product(f, g, arcs, quad_points: int = 16) -> ArcInnerProduct:
    """Gauss-Legendre quadrature of S_f conj(S_g) over the union of the arcs.

    Each merged interval of width w gets max(quad_points, pi N w + 32) nodes,
    enough for a trigonometric polynomial of degree N.  The full-circle value
    sum_x f(x) conj(g(x)) is exact (Parseval) and gives the arc share.
    """
    if quad_points < 16:
        raise ParameterError("need at least 16 quadrature points per arc")
    fv = np.asarray(_as_table(f), dtype=np.complex128)
    gv = np.asarray(_as_table(g), dtype=np.complex128)
    if fv.shape != gv.shape:
        raise ParameterError("f and g must have equal length")
    N = fv.shape[0]
    intervals = arcs.union() if isinstance(arcs, ArcSet) else circle_union(arcs)
    x = np.arange(N)
    total = 0j
    for lo, hi in intervals:
        width = float(hi - lo)
        nodes = max(quad_points, int(math.pi * N * width) + 32)
        t, w = np.polynomial.legendre.leggauss(nodes)
        alpha = float(lo) + (t + 1) * width / 2
        for start in range(0, nodes, 256):
            a = alpha[start : start + 256]
            ph = e(np.outer(a, x))
            total += np.dot(w[start : start + 256], (ph @ fv) * np.conj(ph @ gv)) * width / 2
    full = complex(np.dot(fv, np.conj(gv)))
    share = abs(total) / abs(full) if full else 0.0
    return ArcInnerProduct(complex(total), full, share, intervals)


def exact_arc_integral(f, g, intervals) -> complex:
    """Closed form of the same integral: sum_d c_d int e(d alpha), c_d = sum_x f(x) conj g(x - d)."""
    fv = np.asarray(_as_table(f), dtype=np.complex128)
    gv = np.asarray(_as_table(g), dtype=np.complex128)
    N = fv.shape[0]
    corr = np.correlate(fv, gv, mode="full")  # index k <-> d = k - (N - 1)
    d = np.arange(-(N - 1), N)
    total = 0j
    for lo, hi in circle_union(intervals):
        lo, hi = float(lo), float(hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            I = (e(d * hi) - e(d * lo)) / (2j * np.pi * d)
        I[N - 1] = hi - lo
        total += np.dot(corr, I)
    return complex(total)


def kaiser_beta(attenuation_db: float) -> float:
    """Kaiser's empirical window parameter for a given stopband attenuation."""
    A = attenuation_db
    if A > 50:
        return 0.1102 * (A - 8.7)
    if A >= 21:
        return 0.5842 * (A - 21) ** 0.4 + 0.07886 * (A - 21)
    return 0.0


@dataclass
class BandlimitedStep:
    """h0(x) = sum_{|b| <= 2**ell} coeffs[b + 2**ell] e(b x), real, |h0| <= 1.

    The reference is the square wave h = 1 on [0, 1/2), -1 on [1/2, 1).  The
    transition zones [1/2 - 2**-ell, 1/2) and [1 - 2**-ell, 1) precede each
    jump, so that h0(0) ~ 1 and h0(1/2) ~ -1.
    """

    ell: int
    coeffs: np.ndarray
    beta: float
    scale: float
    plateau_error: float = 0.0
    C0: float = 0.0
    coeff_l1: float = 0.0
    sup_on_grid: float = 0.0

    @property
    def bandwidth(self) -> int:
        return 1 << self.ell

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.bandwidth, self.bandwidth + 1)

    def on_grid(self, G: int) -> np.ndarray:
        """h0(k/G) for k < G (aliasing folded, so any G works)."""
        arr = np.zeros(G, dtype=np.complex128)
        np.add.at(arr, self.frequencies % G, self.coeffs)
        return (np.fft.ifft(arr) * G).real

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        M = self.bandwidth
        pos = self.coeffs[M + 1 :]
        b = np.arange(1, M + 1)
        out = np.empty(x.shape, dtype=np.float64)
        for start in range(0, x.size, 64):
            xs = x[start : start + 64]
            out[start : start + 64] = 2 * (e(np.outer(xs, b)) @ pos).real + self.coeffs[M].real
        return out

    def plateau_errors(self, min_distance: float, G: int = 1 << 16) -> float:
        """max |h0 - h| over grid nodes at distance >= min_distance from 0 and 1/2."""
        x = np.arange(G) / G
        h = np.where(x < 0.5, 1.0, -1.0)
        dist = np.minimum.reduce([x, np.abs(x - 0.5), 1 - x])
        keep = dist >= min_distance
        return float(np.abs(self.on_grid(G) - h)[keep].max())

    def l2_error(self, G: int = 1 << 16) -> float:
        x = np.arange(G) / G
        h = np.where(x < 0.5, 1.0, -1.0)
        return float(np.sqrt(np.mean((self.on_grid(G) - h) ** 2)))


def _square_wave_coeffs(M: int, shift: float) -> np.ndarray:
    """Fourier coefficients of h(x + shift) for |b| <= M."""
    b = np.arange(-M, M + 1)
    out = np.zeros(2 * M + 1, dtype=np.complex128)
    odd = b % 2 != 0
    out[odd] = 2 / (np.pi * 1j * b[odd]) * e(b[odd] * shift)
    return out


def _sup_abs(step: BandlimitedStep) -> float:
    """sup |h0|: dense grid, then local refinement of the largest peaks."""
    G = 1 << min(max(16, step.ell + 6), 24)
    vals = np.abs(step.on_grid(G))
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    top = peaks[np.argsort(vals[peaks])[-8:]]
    best = float(vals.max())
    for k in top:
        res = minimize_scalar(lambda t: -abs(step(t)[0]), bounds=((k - 1) / G, (k + 1) / G),
                              method="bounded", options={"xatol": 1e-3 / G})
        best = max(best, -float(res.fun))
    return best


def bandlimited_step(ell: int) -> BandlimitedStep:
    """Kaiser-windowed square wave with frequencies in [-2**ell, 2**ell].

    The window is sized for a ripple of 2**-ell; the result is rescaled so
    that |h0| <= 1, and the plateau error at distance >= 2**-ell from the
    jumps is measured and recorded as C0 * 2**-ell.
    """
    if not 2 <= ell <= 24:
        raise ParameterError(f"bandwidth exponent ell={ell} outside 2..24")
    M = 1 << ell
    beta = kaiser_beta(20 * math.log10(M))
    coeffs = _square_wave_coeffs(M, 2.0 ** (-ell - 1)) * np.kaiser(2 * M + 1, beta)
    step = BandlimitedStep(ell=ell, coeffs=coeffs, beta=beta, scale=1.0)
    sup = _sup_abs(step)
    if sup > 1:
        step.scale = 1 / sup
        step.coeffs = coeffs / sup
    step.coeff_l1 = float(np.abs(step.coeffs).sum())
    step.sup_on_grid = float(np.abs(step.on_grid(1 << 16)).max())
    step.plateau_error = step.plateau_errors(2.0**-ell)
    step.C0 = step.plateau_error * M
    if step.sup_on_grid > 1 + 1e-9:
        raise ContractError(f"|h0| reaches {step.sup_on_grid} > 1 + 1e-9")
    if not step.plateau_error < 1:
        raise ContractError(f"plateau error {step.plateau_error} >= 1: h0 has the wrong sign")
    return step


@dataclass(frozen=True)
class WalshApprox:
    A: int
    ell: int
    m: int
    table: np.ndarray
    l2_error: float
    coeff_l1: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.l2_error <= self.bound


def walsh_approx(A: int, ell: int, m: int, step: BandlimitedStep | None = None,
                 constant: float = WALSH_APPROX_CONSTANT) -> WalshApprox:
    """w~_A(y) = prod_{j in A} h0(y / 2**(j+1)) on [0, 2**m)."""
    k = A.bit_count()
    if not k <= m <= 24:
        raise ParameterError(f"need |A| <= m <= 24, got |A|={k}, m={m}")
    if A >> m:
        raise ParameterError(f"mask {A:#x} has bits beyond m={m}")
    step = bandlimited_step(ell) if step is None else step
    y = np.arange(1 << m)
    table = np.ones(1 << m, dtype=np.float64)
    for j in range(m):
        if A >> j & 1:
            period = 1 << (j + 1)
            table *= step.on_grid(period)[y % period]
    err = float(np.sqrt(np.mean((walsh_table(A, m) - table) ** 2)))
    return WalshApprox(A, ell, m, table, err, step.coeff_l1**k, constant * k * 2.0 ** (-ell / 2))
