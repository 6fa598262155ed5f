"""The noise operator T_rho on the Boolean cube and the low-level/tail split.

T_rho multiplies the Walsh coefficient at A by rho**|A|; equivalently it is
the dyadic convolution with K_rho(y) = prod_j (1 + rho - 2 rho y_j), since on
bits x + y - 2xy is x XOR y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _backend
from .errors import CapacityError, ContractError, ParameterError
from .walsh import (WalshSpectrum, _as_table, _exponent, fwht, inverse_transform, level_profile,
                    popcounts, real_transform)

KERNEL_MAX_EXPONENT = 20
CONVOLUTION_MAX_EXPONENT = 14


@dataclass(frozen=True)
class NoiseParams:
    rho: float
    n0: int | None = None
    K: float | None = None

    def __post_init__(self):
        if not 0 <= self.rho <= 1:
            raise ParameterError(f"rho={self.rho} outside [0, 1]")

    @classmethod
    def from_n0(cls, n0: int, K: float | None = None) -> "NoiseParams":
        if n0 < 1:
            raise ParameterError("n0 must be a positive integer")
        return cls(rho=1 - 1 / n0, n0=n0, K=K)


def kernel_K(rho: float, n: int) -> np.ndarray:
    if n > KERNEL_MAX_EXPONENT:
        raise CapacityError(f"dense kernel limited to n <= {KERNEL_MAX_EXPONENT}")
    ones = popcounts(n).astype(np.int64)
    return (1 + rho) ** (n - ones) * (1 - rho) ** ones


def _damping(n: int, rho: float) -> np.ndarray:
    return rho ** popcounts(n).astype(np.float64)


def apply_noise_multiplier(spectrum, rho: float) -> np.ndarray:
    """Unnormalized coefficients of T_rho f: coeffs[A] * rho**|A| (float64)."""
    coeffs = spectrum.coeffs if isinstance(spectrum, WalshSpectrum) else np.asarray(spectrum)
    n = _exponent(coeffs.shape[0])
    return coeffs.astype(np.float64) * _damping(n, rho)


def noise(f, rho: float) -> np.ndarray:
    """T_rho f through the multiplier route (the production path)."""
    return inverse_transform(apply_noise_multiplier(real_transform(_as_table(f)), rho))


def apply_noise_convolution(f, rho: float, *, backend: str | None = None) -> np.ndarray:
    """T_rho f = mean_y f(x XOR y) K_rho(y); quadratic cost, an oracle for small n."""
    values = np.ascontiguousarray(_as_table(f), dtype=np.float64)
    n = _exponent(values.shape[0])
    if n > CONVOLUTION_MAX_EXPONENT:
        raise CapacityError(f"convolution oracle limited to n <= {CONVOLUTION_MAX_EXPONENT}")
    return _backend.get_backend(backend).xor_convolve(values, kernel_K(rho, n))


def quadratic_form(spectrum: WalshSpectrum, rho: float) -> Fraction:
    """<f, T_rho f> = sum_A rho**|A| f^(A)**2 (exact for rational rho)."""
    rho = Fraction(rho)
    prof = level_profile(spectrum)
    return sum((m * rho**k for k, m in enumerate(prof.masses)), Fraction(0))


def tail_masses(spectrum: WalshSpectrum, rho) -> list[Fraction]:
    """For each l = 0..n: sum_{|A| > l} (rho**|A| f^(A))**2, exact."""
    rho = Fraction(rho)
    masses = level_profile(spectrum).masses
    out = []
    acc = Fraction(0)
    for k in range(spectrum.n, -1, -1):
        out.append(acc)
        acc += masses[k] * rho ** (2 * k)
    return out[::-1]


@dataclass
class Decomposition:
    """T_rho f = f1 + f2 with f1 band-limited to levels <= cutoff."""

    f1: np.ndarray
    f2: np.ndarray
    cutoff: int
    rho: Fraction
    f2_norm: float
    bound: float
    f2_mass_exact: Fraction | None = None
    bound_exact: Fraction | None = None
    in_lemma_range: bool = True
    notes: list = field(default_factory=list)


def lemma1_decompose(f, n0: int, K: float) -> Decomposition:
    """Split T_rho f (rho = 1 - 1/n0) at level floor(K n0).

    Checks ||f2||_2 <= (1 - 1/n0)**floor(K n0) * sqrt(N), exactly (rational
    arithmetic) when f is integer-valued.  K must exceed 1 and floor(K n0)
    must not exceed n; whether K < n/(2 n0) also holds is reported in
    ``in_lemma_range`` rather than enforced.
    """
    values = _as_table(f)
    n = _exponent(values.shape[0])
    N = 1 << n
    if n0 < 1:
        raise ParameterError("n0 must be a positive integer")
    if not K > 1:
        raise ParameterError(f"K={K} must exceed 1")
    cutoff = math.floor(K * n0)
    if cutoff > n:
        raise ParameterError(f"truncation level floor(K*n0)={cutoff} exceeds n={n}")
    if np.abs(values).max(initial=0) > 1:
        raise ParameterError("the level decomposition needs |f| <= 1")
    rho = Fraction(n0 - 1, n0)
    levels = popcounts(n)
    damped = apply_noise_multiplier(real_transform(values), float(rho))
    high = levels > cutoff
    f1 = inverse_transform(np.where(high, 0.0, damped))
    f2 = inverse_transform(np.where(high, damped, 0.0))
    f2_norm = float(np.sqrt(np.dot(f2, f2)))
    bound = float(rho) ** cutoff * math.sqrt(N)

    mass_exact = bound_exact = None
    integer_valued = np.issubdtype(values.dtype, np.integer) or np.array_equal(values, np.rint(values))
    if integer_valued:
        mass_exact = tail_masses(fwht(values), rho)[cutoff]
        bound_exact = rho ** (2 * cutoff)
        ok = mass_exact <= bound_exact
    else:
        ok = f2_norm <= bound * (1 + 1e-12)
    if not ok:
        raise ContractError(f"tail bound violated: ||f2||={f2_norm} > {bound}")
    dec = Decomposition(
        f1=f1, f2=f2, cutoff=cutoff, rho=rho, f2_norm=f2_norm, bound=bound,
        f2_mass_exact=mass_exact, bound_exact=bound_exact,
        in_lemma_range=K < n / (2 * n0),
    )
    if not dec.in_lemma_range:
        dec.notes.append(f"K={K} is outside 1 < K < n/(2 n0) = {n / (2 * n0):g}")
    return dec


def tail_report(spectrum: WalshSpectrum, n0: int) -> dict:
    """Tail masses of T_rho f against (1 - 1/n0)**(2l) * ||f||^2 for every l."""
    rho = Fraction(n0 - 1, n0)
    total = level_profile(spectrum).total()
    rows = []
    for ell, tail in enumerate(tail_masses(spectrum, rho)):
        bound = rho ** (2 * ell) * total
        rows.append({"level": ell, "tail": tail, "bound": bound, "holds": tail <= bound})
    return {
        "n": spectrum.n,
        "n0": n0,
        "rho": rho,
        "quadratic_form": quadratic_form(spectrum, rho),
        "rows": rows,
    }
