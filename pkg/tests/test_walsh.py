from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from moebius_walsh.arith import sieve_moebius
from moebius_walsh.errors import CapacityError, ParameterError
from moebius_walsh.walsh import (LevelProfile, WalshSpectrum, fwht, interval_cap, level_profile,
                                 low_degree_truncate, low_level_mass, mask, naive_coefficient,
                                 real_transform, select_good_interval, walsh_eval, walsh_table)
from oracles import walsh_naive


def int_tables(max_n=10, lo=-3, hi=3):
    return st.integers(0, max_n).flatmap(
        lambda n: hnp.arrays(np.int64, 1 << n, elements=st.integers(lo, hi)))


@pytest.mark.parametrize("A,x,w", [(0, 7, 1), (0b101, 5, 1), (0b10, 2, -1), (0b1, 3, -1)])
def test_walsh_eval_examples(A, x, w):
    assert walsh_eval(A, x) == w


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_walsh_eval_product_formula(A, x):
    assert walsh_eval(A, x) == walsh_naive(A, x)


def test_walsh_table_matches_eval():
    for A in range(16):
        assert walsh_table(A, 4).tolist() == [walsh_eval(A, x) for x in range(16)]


def test_fwht_examples(backend):
    mu = sieve_moebius(2)
    assert fwht(mu, backend=backend).coeffs.tolist() == [-1, -1, 3, -1]
    assert fwht(np.array([1, 1]), backend=backend).coeffs.tolist() == [2, 0]


def test_naive_examples():
    mu = sieve_moebius(2)
    assert naive_coefficient(mu, 0b10) == 3
    assert naive_coefficient(mu, 0b11) == -1
    assert naive_coefficient(mu, 0) == mu.mertens()


def test_fwht_n12_random_masks(rng, backend):
    mu = sieve_moebius(12)
    s = fwht(mu, backend=backend)
    for A in rng.integers(0, 1 << 12, size=200):
        assert s.coeffs[A] == naive_coefficient(mu, int(A))


@pytest.mark.parametrize("n", range(1, 9))
def test_fwht_all_masks(n, backend):
    mu = sieve_moebius(n)
    s = fwht(mu, backend=backend)
    assert s.coeffs.tolist() == [naive_coefficient(mu, A) for A in range(1 << n)]


def test_backends_agree(rng):
    from moebius_walsh._backend import available_backends
    t = rng.integers(-5, 6, size=1 << 14)
    results = [fwht(t, backend=b).coeffs for b in available_backends()]
    assert all(np.array_equal(results[0], r) for r in results)


@given(int_tables())
def test_involution(t):
    N = t.shape[0]
    twice = fwht(fwht(t).coeffs)
    assert np.array_equal(twice.coeffs, N * t)


@given(int_tables())
def test_parseval_exact(t):
    s = fwht(t)
    N = t.shape[0]
    assert sum(int(c) ** 2 for c in s.coeffs) == N * sum(int(v) ** 2 for v in t)


@given(st.integers(0, 9).flatmap(lambda n: st.tuples(
    hnp.arrays(np.int64, 1 << n, elements=st.integers(-4, 4)),
    hnp.arrays(np.int64, 1 << n, elements=st.integers(-4, 4)))))
def test_plancherel_pairing(pair):
    f, g = pair
    N = f.shape[0]
    F, G = fwht(f).coeffs, fwht(g).coeffs
    assert N * int(np.dot(f, g)) == int(np.dot(F, G))


@given(int_tables(max_n=8))
def test_coefficients_bounded(t):
    s = fwht(t)
    assert np.abs(s.coeffs).max() <= t.shape[0] * max(1, np.abs(t).max())


def test_fwht_rejects_fractional():
    with pytest.raises(ParameterError):
        fwht(np.array([0.5, 1.0]))
    assert fwht(np.array([1.0, -1.0])).coeffs.tolist() == [0, 2]


def test_fwht_rejects_bad_length():
    with pytest.raises(ParameterError):
        fwht(np.array([1, 2, 3]))


def test_fwht_overflow_guard():
    with pytest.raises(CapacityError):
        fwht(np.full(1 << 4, 2**60, dtype=np.int64))


def test_fwht_leaves_input_untouched():
    t = np.array([1, 2, 3, 4])
    fwht(t)
    assert t.tolist() == [1, 2, 3, 4]


def test_level_profile_n2():
    prof = level_profile(fwht(sieve_moebius(2)))
    assert prof.masses == [Fraction(1, 16), Fraction(10, 16), Fraction(1, 16)]
    assert prof.total() == Fraction(3, 4)
    assert prof.numerators == (1, 10, 1) and prof.denominator == 16


def test_level_profile_csv():
    csv = level_profile(fwht(sieve_moebius(2))).to_csv().splitlines()
    assert csv[0] == "level,mass_num,mass_den,mass_float"
    assert csv[2] == "1,10,16,0.625"


def test_level_profile_constant():
    prof = level_profile(fwht(np.ones(16, dtype=np.int64)))
    assert prof.masses[0] == 1 and all(m == 0 for m in prof.masses[1:])


def test_level_profile_wide_fallback():
    # coefficients too large for the int64 kernel path go through Python ints
    t = np.zeros(4, dtype=np.int64)
    t[0] = 2**40
    prof = level_profile(fwht(t))
    assert prof.numerators == (2**80, 2 * 2**80, 2**80)


@given(int_tables(max_n=9))
def test_level_profile_sums_to_mean_square(t):
    prof = level_profile(fwht(t))
    assert prof.total() == Fraction(int(np.dot(t, t)), t.shape[0])
    assert all(m >= 0 for m in prof.masses)


def test_low_level_mass_examples():
    s = fwht(sieve_moebius(2))
    assert low_level_mass(s, 1) == Fraction(11, 16)
    assert low_level_mass(s, 2) == Fraction(3, 4)
    mu = sieve_moebius(10)
    assert low_level_mass(fwht(mu), 0) == Fraction(mu.mertens() ** 2, mu.N**2)
    with pytest.raises(ParameterError):
        low_level_mass(s, 3)


@given(int_tables(max_n=8), st.integers(0, 8), st.integers(0, 8))
def test_low_level_mass_monotone(t, a, b):
    s = fwht(t)
    a, b = sorted((min(a, s.n), min(b, s.n)))
    assert low_level_mass(s, a) <= low_level_mass(s, b)


def test_low_degree_truncate_examples():
    s = fwht(sieve_moebius(2))
    assert np.allclose(low_degree_truncate(s, 1), [0.25, 0.75, -1.25, -0.75])
    assert np.allclose(low_degree_truncate(s, 2), [0, 1, -1, -1])
    assert np.allclose(low_degree_truncate(s, 0), -0.25)


def test_interval_cap_examples():
    n = 6
    B = mask([1, 2, 4])
    s = fwht(walsh_table(B, n))
    out = interval_cap(s, (1, 3), 2)
    assert np.allclose(out.table, 0) and out.discarded_mass == 1
    out = interval_cap(s, (0, 2), 2)
    assert np.allclose(out.table, walsh_table(B, n)) and out.discarded_mass == 0


def test_interval_cap_n3_mu():
    mu = sieve_moebius(3)
    s = fwht(mu)
    out = interval_cap(s, (1, 3), 2)
    expect = Fraction(int(s.coeffs[0b110]) ** 2 + int(s.coeffs[0b111]) ** 2, 64)
    assert out.discarded_mass == expect


@given(int_tables(max_n=7), st.data())
def test_cap_beyond_interval_is_identity(t, data):
    s = fwht(t)
    if s.n == 0:
        return
    start = data.draw(st.integers(0, s.n - 1))
    stop = data.draw(st.integers(start + 1, s.n))
    out = interval_cap(s, (start, stop), stop - start + 1)
    assert np.allclose(out.table, t) and out.discarded_mass == 0


def test_interval_cap_rejects():
    s = fwht(sieve_moebius(4))
    with pytest.raises(ParameterError):
        interval_cap(s, (2, 6), 1)
    with pytest.raises(ParameterError):
        interval_cap(s, (0, 2), 0)


def test_select_good_interval_exhaustive():
    s = fwht(sieve_moebius(12))
    choice = select_good_interval(s, 3, 2, 2.0, 3)
    assert set(choice.candidates) == {1, 2}
    assert choice.capped_mass == min(choice.candidates.values())
    for a, mass in choice.candidates.items():
        assert mass == interval_cap(s, (3 * a, 3 * a + 3), 2).discarded_mass


def test_select_good_interval_trivial_cases():
    s = fwht(np.ones(1 << 12, dtype=np.int64))
    assert select_good_interval(s, 3, 2, 2.0, 3).capped_mass == 0
    s = fwht(walsh_table(mask([0, 7]), 12))
    choice = select_good_interval(s, 2, 3, 2.0, 3)
    assert all(v == 0 for v in choice.candidates.values())
    assert choice.meets_threshold


def test_select_good_interval_empty_range():
    with pytest.raises(ParameterError):
        select_good_interval(fwht(sieve_moebius(6)), 4, 2, 2.0, 2)


def test_spectrum_helpers():
    s = fwht(sieve_moebius(2))
    assert s.coefficient(2) == Fraction(3, 4)
    assert s.max_abs_coefficient() == Fraction(3, 4)
    assert s == WalshSpectrum(2, np.array([-1, -1, 3, -1]))
    assert np.allclose(real_transform([1.5, 0.5]), [2.0, 1.0])
    assert isinstance(level_profile(s), LevelProfile)
