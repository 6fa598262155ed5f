import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from moebius_walsh.arith import sieve_moebius
from moebius_walsh.correlation import (BooleanFunction, bt_level, correlate, correlation_split,
                                       is_monotone, monotone_generate, spectral_concentration,
                                       spectral_pairing)
from moebius_walsh.errors import ParameterError
from moebius_walsh.walsh import fwht, level_profile, walsh_table

FAMILIES = [("majority", {}), ("and", {}), ("or", {}), ("dictator", {"j": 2}), ("tribes", {"w": 2}),
            ("tribes", {"w": 3})]


def test_dictator_is_walsh():
    assert np.array_equal(monotone_generate("dictator", 2, j=0).table, walsh_table(1, 2))
    assert np.array_equal(monotone_generate("dictator", 6, j=4).table, walsh_table(16, 6))


def test_majority3_spectrum():
    prof = level_profile(fwht(monotone_generate("majority", 3).table))
    assert prof.masses == [0, Fraction(3, 4), 0, Fraction(1, 4)]


def test_and2():
    t = monotone_generate("and", 2).table
    assert (t == -1).sum() == 1 and t[3] == -1


@pytest.mark.parametrize("kind,kw", FAMILIES)
@pytest.mark.parametrize("n", [1, 5, 9])
def test_families_monotone(kind, kw, n):
    if kind == "majority" and n % 2 == 0 or kind == "dictator" and kw["j"] >= n or kind == "tribes" and kw["w"] > n:
        return
    g = monotone_generate(kind, n, **kw)
    assert g.monotone and set(np.unique(g.table)) <= {-1, 1}


def test_generate_errors():
    with pytest.raises(ParameterError):
        monotone_generate("majority", 4)
    with pytest.raises(ParameterError):
        monotone_generate("parity", 4)
    with pytest.raises(ParameterError):
        monotone_generate("dictator", 3, j=3)
    with pytest.raises(ParameterError):
        monotone_generate("and", 25)


def test_non_monotone_detected():
    assert not BooleanFunction.from_table(-walsh_table(1, 3)).monotone
    assert not BooleanFunction.from_table(walsh_table(3, 3)).monotone
    with pytest.raises(ParameterError):
        BooleanFunction.from_table([1, 0])


@given(st.integers(1, 8), st.data())
def test_monotone_closure(n, data):
    kinds = [k for k in FAMILIES if not (k[0] == "majority" and n % 2 == 0)
             and not (k[0] == "dictator" and k[1]["j"] >= n) and not (k[0] == "tribes" and k[1]["w"] > n)]
    k1 = data.draw(st.sampled_from(kinds))
    k2 = data.draw(st.sampled_from(kinds))
    f, g = monotone_generate(k1[0], n, **k1[1]), monotone_generate(k2[0], n, **k2[1])
    assert (f & g).monotone and (f | g).monotone
    assert is_monotone(np.minimum(f.table, g.table)) and is_monotone(np.maximum(f.table, g.table))


@given(st.integers(1, 8).flatmap(lambda n: hnp.arrays(np.int64, 1 << n, elements=st.sampled_from([-1, 1]))))
def test_boolean_parseval(t):
    assert level_profile(fwht(t)).total() == 1


def test_correlate_examples():
    mu = sieve_moebius(10)
    s = fwht(mu)
    for A in (0, 1, 37, 1023):
        assert correlate(mu, walsh_table(A, 10)) == s.coefficient(A)
    assert correlate(mu, mu) == Fraction(mu.squarefree_count(), mu.N)
    with pytest.raises(ParameterError):
        correlate(np.ones(4), np.ones(8))


def test_correlate_mu_majority_two_ways():
    mu = sieve_moebius(15)
    maj = monotone_generate("majority", 15)
    direct = correlate(mu, maj, check=False)
    assert direct == spectral_pairing(mu, maj)
    assert abs(float(direct) - float(spectral_pairing(mu, maj))) < 1e-12


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    hnp.arrays(np.int64, 1 << n, elements=st.integers(-2, 2)),
    hnp.arrays(np.int64, 1 << n, elements=st.integers(-2, 2)))))
def test_cauchy_schwarz(pair):
    f, g = pair
    N = f.shape[0]
    c = correlate(f, g)
    assert c * c <= Fraction(int(np.dot(f, f)), N) * Fraction(int(np.dot(g, g)), N)


def test_concentration_examples():
    assert spectral_concentration(monotone_generate("dictator", 6, j=1), 1) == 0
    assert spectral_concentration(monotone_generate("majority", 3), 1) == Fraction(1, 4)
    maj = monotone_generate("majority", 15)
    assert spectral_concentration(maj, math.ceil(4 * math.sqrt(15))) == 0
    assert spectral_concentration(maj, 9) < 0.1 < spectral_concentration(maj, 8)
    assert bt_level(15) == 15


@pytest.mark.parametrize("kind,kw", FAMILIES)
@pytest.mark.parametrize("level", [0, 2, 4, 8])
def test_split_inequality_exact(kind, kw, level):
    n = 11
    mu = sieve_moebius(n)
    g = monotone_generate(kind, n, **kw)
    split = correlation_split(mu, g, level)
    assert split.low_part + split.high_part == split.correlation == correlate(mu, g)
    assert split.holds
    assert abs(float(split.high_part)) <= split.tail_bound + 1e-15
    assert split.f_mass == Fraction(mu.squarefree_count(), mu.N)


def test_split_guards():
    g = monotone_generate("and", 4)
    with pytest.raises(ParameterError):
        correlation_split(np.ones(8), g, 1)
    with pytest.raises(ParameterError):
        correlation_split(np.ones(16), g, 5)
