import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from moebius_walsh.arith import euler_phi, sieve_moebius
from moebius_walsh.errors import CapacityError, ParameterError
from moebius_walsh.expsums import (WALSH_APPROX_CONSTANT, WALSH_FOURIER_CONSTANT, arc_indicator,
                                   arc_inner_product, bandlimited_step, circle_union, exact_arc_integral,
                                   generating_sum, grid_sums, major_arcs, minor_arc_scan, phases,
                                   s_walsh_l1_report, walsh_approx, walsh_fourier_expansion)
from moebius_walsh.walsh import mask

small_tables = st.integers(0, 8).flatmap(
    lambda n: hnp.arrays(np.float64, 1 << n, elements=st.integers(-2, 2).map(float)))


def test_generating_sum_examples():
    mu = sieve_moebius(4)
    assert generating_sum(mu, 0) == -1
    f = np.zeros(16)
    f[1] = 1
    for alpha in (0.1, 0.37, Fraction(2, 7)):
        assert abs(generating_sum(f, alpha) - cmath.exp(2j * math.pi * float(alpha))) < 1e-15


@given(small_tables, st.floats(-3, 3, allow_nan=False))
def test_periodic_and_conjugate(f, alpha):
    s = generating_sum(f, alpha)
    assert abs(generating_sum(f, alpha + 1) - s) < 1e-9 * (1 + np.abs(f).sum())
    assert abs(generating_sum(f, -alpha) - s.conjugate()) < 1e-9 * (1 + np.abs(f).sum())
    assert abs(s) <= np.abs(f).sum() + 1e-9


def test_phase_ladder_accuracy():
    # exact rational phases at large x against 50-digit arithmetic
    alpha = Fraction(123457, 1 << 21)
    ph = phases(alpha, 1 << 20)
    mpmath.mp.dps = 50
    for x in (1, 999_983, (1 << 20) - 1):
        ref = complex(mpmath.expjpi(2 * mpmath.mpf(alpha.numerator) * x / alpha.denominator))
        assert abs(ph[x] - ref) < 1e-13


def test_grid_examples():
    mu = sieve_moebius(4)
    S = grid_sums(mu, 16)
    alt = sum(int(mu[k]) * (-1) ** k for k in range(16))
    assert abs(S[8] - alt) < 1e-12
    assert abs(np.mean(np.abs(S) ** 2) - 11) < 1e-12
    ones = grid_sums(np.ones(16), 64)
    assert abs(ones[0] - 16) < 1e-12
    assert np.allclose(ones[4::4], 0)


def test_grid_matches_direct(rng):
    f = rng.integers(-1, 2, size=1 << 10).astype(float)
    S = grid_sums(f, 1 << 12)
    for j in rng.integers(0, 1 << 12, size=50):
        d = generating_sum(f, Fraction(int(j), 1 << 12))
        assert abs(S[j] - d) <= 1e-9 * max(1, abs(d))


def test_grid_errors():
    with pytest.raises(ParameterError):
        grid_sums(np.ones(16), 8)
    with pytest.raises(ParameterError):
        grid_sums(np.ones(16), 24)


@given(small_tables)
def test_grid_parseval(f):
    S = grid_sums(f)
    ref = float(np.dot(f, f))
    assert abs(np.mean(np.abs(S) ** 2) - ref) <= 1e-9 * max(1, ref)


def test_walsh_fourier_examples():
    e = walsh_fourier_expansion(0, 5)
    assert e.coeffs[0] == 1 and not e.coeffs[1:].any()
    e = walsh_fourier_expansion(1, 1)
    assert np.allclose(e.coeffs, [0, 1])
    e = walsh_fourier_expansion(mask([1, 4, 6]), 8)
    assert e.resynthesis_error() < 1e-9
    assert e.l1 > 0 and e.within_bound(WALSH_FOURIER_CONSTANT)


def test_walsh_fourier_capacity():
    with pytest.raises(CapacityError):
        walsh_fourier_expansion(1, 21)
    with pytest.raises(ParameterError):
        walsh_fourier_expansion(1 << 5, 4)


@given(st.integers(2, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                                                      st.integers(0, n - 1))))
def test_tensorization(args):
    n, A, j = args
    if A >> j & 1:
        return
    a = walsh_fourier_expansion(A, n).coeffs
    b = walsh_fourier_expansion(1 << j, n).coeffs
    conv = np.fft.fft(np.fft.ifft(a) * np.fft.ifft(b)) * (1 << n)  # cyclic convolution mod 2**n
    assert np.allclose(conv, walsh_fourier_expansion(A | 1 << j, n).coeffs, atol=1e-12)


def test_walsh_fourier_constant_calibration():
    for n in range(1, 11):
        for A in (1, 3, mask(range(min(n, 4))), (1 << n) - 1 if n <= 4 else mask([0, n - 1])):
            if A >> n:
                continue
            assert walsh_fourier_expansion(A, n).within_bound()


def test_l1_report():
    r = s_walsh_l1_report(1, 6)
    assert r.grid >= 8 * 64
    assert r.relative_change < 0.005
    assert r.value <= r.bound
    r0 = s_walsh_l1_report(0, 8)
    assert 0 < r0.value < r0.bound
    with pytest.raises(ParameterError):
        s_walsh_l1_report(1, 6, grid=64)


def test_major_arc_examples():
    a = major_arcs(2, 16)
    assert [(x.q, x.a, x.half_width) for x in a.arcs] == [(1, 0, Fraction(1, 8))]
    a = major_arcs(3, 16)
    assert [(x.q, x.a, x.center, x.half_width) for x in a.arcs] == [
        (1, 0, 0, Fraction(3, 16)), (2, 1, Fraction(1, 2), Fraction(3, 32))]
    with pytest.raises(ParameterError):
        major_arcs(1, 16)


@given(st.integers(2, 12), st.integers(4, 14))
def test_total_measure_identity(B, n):
    N = 1 << n
    arcs = major_arcs(B, N)
    assert arcs.total_measure == sum(Fraction(euler_phi(q) * 2 * B, q * N) for q in range(1, B))
    assert arcs.union_measure <= min(arcs.total_measure, 1)
    centers = [x.center for x in arcs.arcs]
    assert centers == sorted(centers)
    if arcs.union_measure < arcs.total_measure:
        assert arcs.overlaps


def test_overlaps_reported_when_wide():
    assert major_arcs(5, 16).overlaps
    assert not major_arcs(4, 1 << 12).overlaps


@given(st.integers(2, 6), st.integers(3, 7))
def test_arc_indicator_exact(B, n):
    N = 1 << n
    M = 8 * N
    arcs = major_arcs(B, N)
    ind = arc_indicator(arcs, M)
    for j in range(M):
        x = Fraction(j, M)
        inside = any(abs(((x - arc.center + Fraction(1, 2)) % 1) - Fraction(1, 2)) < arc.half_width
                     for arc in arcs.arcs)
        assert ind[j] == inside


def test_circle_union_wraps():
    pieces = circle_union([(Fraction(-1, 8), Fraction(1, 8)), (Fraction(1, 16), Fraction(1, 4))])
    assert pieces == [(0, Fraction(1, 4)), (Fraction(7, 8), 1)]


def test_minor_arc_scan_examples():
    mu = sieve_moebius(4)
    r = minor_arc_scan(mu.values, 2)
    assert r.sup <= 11
    assert r.ratio <= 1
    # the dense-grid oracle: brute force over the same grid
    M = r.grid
    best = max(abs(generating_sum(mu, Fraction(j, M))) for j in range(M)
               if min(j, M - j) * 16 >= 2 * M)
    assert abs(r.sup - best) < 1e-9
    const = minor_arc_scan(np.ones(64), 2)
    # the q=1 arc has half-width 2/64; the sup is the first Dirichlet-kernel sidelobe past it
    dist = min(const.argmax, 1 - const.argmax)
    assert Fraction(2, 64) <= dist <= Fraction(3, 64)


def test_minor_arc_scan_grid_guard():
    with pytest.raises(ParameterError):
        minor_arc_scan(np.ones(64), 2, grid=128)


def test_arc_inner_product_examples():
    mu = sieve_moebius(4).values
    full = [(Fraction(-1, 2), Fraction(1, 2))]
    r = arc_inner_product(mu, mu, full)
    assert abs(r.value - 11) < 1e-9 and r.full_circle == 11 and abs(r.share - 1) < 1e-9
    assert arc_inner_product(mu, np.zeros(16), full).value == 0
    f = np.arange(16) % 3 - 1.0
    assert abs(arc_inner_product(f, mu, full).value - np.dot(f, mu)) < 1e-9


def test_arc_inner_product_matches_closed_form(rng):
    mu = sieve_moebius(10).values
    g = rng.choice([-1.0, 1.0], size=1 << 10)
    for B in (3, 6, 40):
        arcs = major_arcs(B, 1 << 10)
        r = arc_inner_product(mu, g, arcs, quad_points=16)
        assert abs(r.value - exact_arc_integral(mu, g, arcs.union())) < 1e-9


def test_arc_inner_product_guards():
    with pytest.raises(ParameterError):
        arc_inner_product(np.ones(4), np.ones(4), major_arcs(2, 4), quad_points=8)
    with pytest.raises(ParameterError):
        arc_inner_product(np.ones(4), np.ones(8), major_arcs(2, 4))


@pytest.mark.parametrize("ell", [4, 6, 8, 10])
def test_bandlimited_contract(ell):
    h = bandlimited_step(ell)
    assert h.coeffs.shape == (2 ** (ell + 1) + 1,)
    assert h.frequencies.min() == -(2**ell) and h.frequencies.max() == 2**ell
    assert h.sup_on_grid <= 1 + 1e-9
    assert h.plateau_error <= h.C0 * 2.0**-ell * (1 + 1e-12)
    assert abs(h(0.25)[0] - 1) <= h.C0 * 2.0**-ell
    assert np.allclose(h.coeffs[::-1], np.conj(h.coeffs))  # real-valued


def test_bandlimited_value_at_quarter():
    for ell in (6, 8, 10, 12):
        assert abs(bandlimited_step(ell)(0.25)[0] - 1) < 4 * 2.0**-ell


def test_bandlimited_l2_shrinks():
    assert bandlimited_step(6).l2_error() > bandlimited_step(10).l2_error()


def test_bandlimited_direct_matches_grid():
    h = bandlimited_step(7)
    x = np.arange(64) / 64
    assert np.allclose(h(x), h.on_grid(64), atol=1e-12)


def test_doubling_ell_halves_error_at_fixed_points():
    errs = {ell: bandlimited_step(ell).plateau_errors(1 / 16) for ell in (4, 8, 16)}
    assert errs[8] <= errs[4] / 2
    assert errs[16] <= errs[8] / 2


def test_bandlimited_range():
    with pytest.raises(ParameterError):
        bandlimited_step(1)
    with pytest.raises(ParameterError):
        bandlimited_step(25)


def test_walsh_approx_examples():
    r = walsh_approx(0, 6, 8)
    assert np.all(r.table == 1) and r.l2_error == 0
    r = walsh_approx(mask([2, 7]), 6, 10)
    assert r.l2_error <= WALSH_APPROX_CONSTANT * 2 * 2.0**-3
    assert r.holds
    h = bandlimited_step(6)
    assert abs(r.coeff_l1 - h.coeff_l1**2) < 1e-12


def test_walsh_approx_high_bit_improves_with_bandwidth():
    errs = [walsh_approx(mask([7]), ell, 12).l2_error for ell in (4, 6, 8)]
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("ell", [4, 8, 12])
def test_walsh_approx_bit0_is_set_by_jump_values(ell):
    # every sample y/2 is 0 or 1/2, so the error is fixed by h0 at the two jumps
    h = bandlimited_step(ell)
    at_jumps = np.sqrt(((h(0.0)[0] - 1) ** 2 + (h(0.5)[0] + 1) ** 2) / 2)
    assert abs(walsh_approx(1, ell, 10, h).l2_error - at_jumps) < 1e-12


def test_walsh_approx_guards():
    with pytest.raises(ParameterError):
        walsh_approx(mask([0, 1, 2]), 6, 2)
    with pytest.raises(ParameterError):
        walsh_approx(1 << 9, 6, 8)
