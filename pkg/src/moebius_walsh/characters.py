"""Dirichlet characters stored as exponents in the dual of the unit group.

(Z/q)^* is split into cyclic factors: one per odd prime power (generated by a
primitive root) and, for 2**e, the factors <-1> and <5> (e >= 3) or <-1>
(e = 2).  A character is a tuple of exponents k_i, one per factor, and
chi(a) = exp(2 pi i sum_i k_i log_i(a) / o_i).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from math import gcd

import numpy as np

from .arith import factorize, mobius_upto, mu_point
from .errors import CapacityError, ContractError, DomainError, ParameterError

MAX_MODULUS = 10**6
BERNOULLI_TERMS = 8
_B2J = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510]


def _primitive_root_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    factors = [r for r, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """A primitive root mod p that stays one mod every power of p."""
    g = _primitive_root_mod_prime(p)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class CyclicFactor:
    """One cyclic factor of the unit group: generator g of order `order` mod `modulus`."""

    prime: int
    modulus: int
    generator: int
    order: int
    log: np.ndarray  # log[r] for residues r mod `modulus`; -1 off the factor's units

    @classmethod
    def build(cls, prime: int, modulus: int, generator: int, order: int):
        log = np.full(modulus, -1, dtype=np.int64)
        if prime == 2 and generator == -1:
            # the sign part: log = 0 for a = 1 mod 4, 1 for a = 3 mod 4
            r = np.arange(modulus)
            odd = r % 2 == 1
            log[odd] = np.where(r[odd] % 4 == 1, 0, 1)
            return cls(prime, modulus, generator, order, log)
        if prime == 2:
            # the <5> part: log_5 of +-a, where the sign is chosen to make +-a = 1 mod 4
            x = 1
            for k in range(order):
                log[x] = k
                log[modulus - x] = k
                x = x * 5 % modulus
            return cls(prime, modulus, generator, order, log)
        x = 1
        for k in range(order):
            log[x] = k
            x = x * generator % modulus
        return cls(prime, modulus, generator, order, log)


def _factors_for(q: int) -> tuple:
    out = []
    for p, e in factorize(q) if q > 1 else []:
        pe = p**e
        if p == 2:
            if e >= 2:
                out.append(CyclicFactor.build(2, pe, -1, 2))
            if e >= 3:
                out.append(CyclicFactor.build(2, pe, 5, 1 << (e - 2)))
        else:
            out.append(CyclicFactor.build(p, pe, primitive_root(p), pe - pe // p))
    return tuple(out)


@lru_cache(maxsize=256)
def unit_group(q: int) -> "DirichletGroup":
    return DirichletGroup(q)


class DirichletGroup:
    """The dual of (Z/q)^*, with discrete-log tables per cyclic factor."""

    def __init__(self, q: int):
        if q < 1:
            raise DomainError(f"modulus q={q} must be >= 1")
        if q > MAX_MODULUS:
            raise CapacityError(f"modulus q={q} exceeds {MAX_MODULUS}")
        self.q = q
        self.factors = _factors_for(q)
        r = np.arange(q)
        self.units = np.gcd(r, q) == 1
        if q == 1:
            self.units[:] = True
        # residue logs: logs[i][a] = log of a in factor i
        self.logs = [f.log[r % f.modulus] for f in self.factors]
        self.phi = int(self.units.sum())

    @property
    def orders(self) -> tuple:
        return tuple(f.order for f in self.factors)

    def character(self, exps) -> "DirichletCharacter":
        exps = tuple(int(k) % o for k, o in zip(exps, self.orders))
        if len(exps) != len(self.factors):
            raise ParameterError(f"need {len(self.factors)} exponents for modulus {self.q}")
        return DirichletCharacter(self, exps)

    def characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(self, ks) for ks in product(*(range(o) for o in self.orders))]

    def real_characters(self) -> list["DirichletCharacter"]:
        choices = [(0, o // 2) if o % 2 == 0 else (0,) for o in self.orders]
        return [DirichletCharacter(self, ks) for ks in product(*choices)]


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    group: DirichletGroup
    exps: tuple

    @property
    def q(self) -> int:
        return self.group.q

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.q == other.q and self.exps == other.exps

    def __hash__(self):
        return hash((self.q, self.exps))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.q != self.q:
            raise ParameterError("characters must share a modulus")
        return self.group.character(a + b for a, b in zip(self.exps, other.exps))

    def conj(self) -> "DirichletCharacter":
        return self.group.character(-k for k in self.exps)

    @cached_property
    def order(self) -> int:
        out = 1
        for k, o in zip(self.exps, self.group.orders):
            out = math.lcm(out, o // gcd(k, o))
        return out

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """e(a) with chi(a) = exp(2 pi i e(a) / order); -1 where gcd(a, q) > 1."""
        acc = np.zeros(self.q, dtype=np.int64)
        for k, f, log in zip(self.exps, self.group.factors, self.group.logs):
            acc += (k * self.order // f.order) * log
        acc %= self.order
        acc[~self.group.units] = -1
        return acc

    @cached_property
    def values(self) -> np.ndarray:
        table = self.exponent_table
        out = np.exp(2j * np.pi * table / self.order)
        out[table < 0] = 0
        if self.real:
            out = out.real.round()
        return out

    def __call__(self, a: int):
        e = int(self.exponent_table[a % self.q])
        if e < 0:
            return 0
        if self.real:
            return 1 if e == 0 else -1
        return cmath.exp(2j * math.pi * e / self.order)

    @property
    def principal(self) -> bool:
        return all(k == 0 for k in self.exps)

    @property
    def real(self) -> bool:
        return self.order <= 2

    @cached_property
    def _conductor_data(self):
        return conductor_and_primitive(self)

    @property
    def conductor(self) -> int:
        return self._conductor_data[0]

    @property
    def primitive(self) -> bool:
        return self.conductor == self.q

    def inducing(self) -> "DirichletCharacter":
        return self._conductor_data[1]


def characters_mod(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q; index 0 is the principal one."""
    return unit_group(q).characters()


def real_characters_mod(q: int) -> list[DirichletCharacter]:
    return unit_group(q).real_characters()


def _phi_prime_power(p: int, f: int) -> int:
    return 0 if f == 0 else p**f - p ** (f - 1)


def conductor_and_primitive(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    """Conductor q1 and the primitive character mod q1 inducing chi, factor by factor."""
    # per prime: the level p**f at which the local component lives and its exponents there
    local = {}
    for k, fac in zip(chi.exps, chi.group.factors):
        local.setdefault(fac.prime, []).append((k, fac))
    q1 = 1
    reduced = {}
    for p, parts in local.items():
        if p != 2:
            (k, fac), = parts
            if k == 0:
                continue
            f = next(f for f in range(1, fac.modulus.bit_length()) if (k * _phi_prime_power(p, f)) % fac.order == 0)
            q1 *= p**f
            reduced[p] = (f, [k * _phi_prime_power(p, f) // fac.order])
            continue
        k_sign = parts[0][0]
        k_five = parts[1][0] if len(parts) > 1 else 0
        if k_five:
            o5 = parts[1][1].order
            t = (o5 // gcd(k_five, o5)).bit_length() - 1
            f = t + 2
            q1 *= 1 << f
            reduced[2] = (f, [k_sign, k_five * (1 << (f - 2)) // o5])
        elif k_sign:
            q1 *= 4
            reduced[2] = (2, [k_sign])
    group1 = unit_group(q1)
    exps1 = []
    for fac in group1.factors:
        f, ks = reduced[fac.prime]
        if fac.prime == 2:
            exps1.append(ks[0] if fac.generator == -1 else ks[1])
        else:
            exps1.append(ks[0])
    return q1, DirichletCharacter(group1, tuple(exps1))


def conductor_bruteforce(chi: DirichletCharacter) -> int:
    """Smallest d | q such that chi(a) = 1 for every unit a = 1 mod d."""
    q = chi.q
    table = chi.exponent_table
    for d in sorted(dv for dv in range(1, q + 1) if q % dv == 0):
        a = np.arange(1, q + 1, d) % q
        if np.all(table[a][table[a] >= 0] == 0):
            return d
    return q


def _phases(q: int, k: int) -> np.ndarray:
    a = np.arange(q)
    return np.exp(2j * np.pi * ((a * k) % q) / q)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/q); |tau| = sqrt(q) is enforced for primitive chi."""
    tau = complex(np.dot(chi.values, _phases(chi.q, 1)))
    if chi.primitive and abs(abs(tau) - math.sqrt(chi.q)) > 1e-9:
        raise ContractError(f"|tau| = {abs(tau)} differs from sqrt({chi.q})")
    return tau


def c_coefficient_direct(chi: DirichletCharacter, k: int) -> complex:
    return complex(np.dot(chi.values, _phases(chi.q, k)))


def c_coefficient_closed(chi: DirichletCharacter, k: int) -> complex:
    """mu(m) chi1(m) conj(chi1(k/d)) tau(chi1) phi(q)/phi(q/d), m = q/(q1 d), d = (k, q);
    zero unless q1 divides q/d."""
    q = chi.q
    d = gcd(k, q)
    r = q // d
    q1, chi1 = chi._conductor_data
    if r % q1:
        return 0j
    m = r // q1
    mu_m = mu_point(m)
    if mu_m == 0:
        return 0j
    phi_q, phi_r = chi.group.phi, unit_group(r).phi
    return mu_m * chi1(m) * complex(chi1(k // d)).conjugate() * gauss_sum(chi1) * phi_q / phi_r


def c_table(q: int) -> tuple[list[DirichletCharacter], np.ndarray]:
    """Characters mod q and the matrix c[i, k] = c_{chi_i}(k), k < q (direct sums)."""
    chars = characters_mod(q)
    V = np.array([c.values for c in chars], dtype=np.complex128)
    a = np.arange(q)
    E = np.exp(2j * np.pi * (np.outer(a, a) % q) / q)
    return chars, V @ E


def expansion_identity_check(q: int) -> float:
    """max |e(ak/q) - (1/phi(q)) sum_chi conj(chi(a)) c_chi(k)| over units a and all k."""
    if q > 200:
        raise CapacityError("expansion check limited to q <= 200")
    chars, C = c_table(q)
    V = np.array([c.values for c in chars], dtype=np.complex128)
    group = unit_group(q)
    recon = np.conj(V).T @ C / group.phi
    a = np.arange(q)
    exact = np.exp(2j * np.pi * (np.outer(a, a) % q) / q)
    units = group.units
    return float(np.abs(recon[units] - exact[units]).max())


@dataclass(frozen=True)
class TwistedSum:
    value: complex
    interval: tuple
    log_N: float
    references: dict


def mu_twisted_sum(chi: DirichletCharacter, interval, mu=None) -> TwistedSum:
    """sum_{x0 <= k < x1} mu(k) chi(k), with |I|/(log N)**A for A = 1, 2, 3 alongside."""
    x0, x1 = interval
    if x0 < 0 or x1 < x0:
        raise ParameterError(f"bad interval {interval}")
    if mu is None:
        if x1 > 1 << 30:
            raise CapacityError("interval beyond the sievable range 2**30")
        N = max(2, 1 << max(1, (x1 - 1).bit_length()))
        mu = mobius_upto(N)
    else:
        mu = np.asarray(getattr(mu, "values", mu))
        N = mu.shape[0]
        if x1 > N:
            raise CapacityError(f"interval end {x1} beyond sieved range {N}")
    k = np.arange(x0, x1)
    value = complex(np.dot(mu[x0:x1].astype(np.float64), chi.values[k % chi.q])) if x1 > x0 else 0j
    L = math.log(N)
    refs = {A: (x1 - x0) / L**A for A in (1, 2, 3)}
    return TwistedSum(value, (x0, x1), L, refs)


def _pole_free_tail(s, x):
    """(x**(1-s) - 1)/(s - 1), continuous at s = 1 where it equals -log x."""
    L = np.log(x)
    t = (1 - s) * L
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(np.abs(t) < 1e-300, 1.0, np.expm1(t) / np.where(t == 0, 1, t))
    return -L * ratio


def _hurwitz_regularized(s, a, terms: int = 24):
    """zeta(s, a) - 1/(s - 1) by Euler-Maclaurin; broadcasts over s and a.

    With the cut at a + 24 and eight Bernoulli corrections the remainder is
    below 1e-14 for 0.5 <= s <= 1.5 and 0 < a <= 1.
    """
    s = np.asarray(s, dtype=np.float64)[..., None]
    a = np.asarray(a, dtype=np.float64)
    head = np.zeros(np.broadcast_shapes(s.shape, a.shape))
    for j in range(terms):
        head += (a + j) ** (-s)
    x = a + terms
    total = head + _pole_free_tail(s, x) + 0.5 * x ** (-s)
    rising = s.copy()  # s (s+1) ... (s + 2j - 2)
    for j, b in enumerate(_B2J, start=1):
        total += b / math.factorial(2 * j) * rising * x ** (-s - 2 * j + 1)
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
    return total


def hurwitz_zeta(s: float, a: float) -> float:
    if s == 1:
        raise DomainError("Hurwitz zeta has a pole at s = 1")
    if not 0 < a <= 1:
        raise ParameterError("shift a must lie in (0, 1]")
    return float(_hurwitz_regularized(s, a)[0]) + 1 / (s - 1)


def l_values(chi: DirichletCharacter, s) -> np.ndarray:
    """L(s, chi) for an array of real s; the pole terms cancel for non-principal chi."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=np.float64))
    units = np.flatnonzero(chi.group.units)
    shifts = np.where(units == 0, chi.q, units) / chi.q
    Z = _hurwitz_regularized(s_arr, shifts)
    out = (Z @ chi.values[units]) * chi.q ** (-s_arr)
    if chi.principal:
        out = out + chi.group.phi * chi.q ** (-s_arr) / (s_arr - 1)
    return out


def l_value_real_axis(chi: DirichletCharacter, s: float):
    if not 0.5 < s <= 1.5:
        raise ParameterError(f"s={s} outside (0.5, 1.5]")
    if chi.principal and s == 1:
        raise DomainError("L(s, chi0) has a pole at s = 1")
    value = l_values(chi, [s])[0]
    return float(value.real) if chi.real else complex(value)


def real_primitive_characters(q: int) -> list[DirichletCharacter]:
    return [c for c in real_characters_mod(q) if c.primitive and not c.principal]


def _real_zeros(chi: DirichletCharacter, sigma_min: float, step: float = 1e-3, tol: float = 1e-8):
    grid = np.arange(sigma_min, 1 + step / 2, step)
    vals = l_values(chi, grid).real
    zeros = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        while hi - lo > tol:
            mid = (lo + hi) / 2
            fm = l_values(chi, [mid])[0].real
            if np.sign(fm) == np.sign(flo):
                lo, flo = mid, fm
            else:
                hi = mid
        zeros.append((lo + hi) / 2)
    return zeros


def r_cutoff(N: float, c1: float = 1.0) -> float:
    """R = exp(c1 log N / log log N)."""
    L = math.log(N)
    return math.exp(c1 * L / math.log(L))


def exceptional_scan(qmax: int, sigma_min: float = 0.6, *, N: float = 2.0**24, c1: float = 1.0) -> dict:
    """Real primitive characters mod q <= qmax: L(1, chi), real zeros in [sigma_min, 1],
    ranking by L(1, chi), and the count at moduli 2**k, k >= 4 (expected zero)."""
    if not 1 <= qmax <= 10**4:
        raise ParameterError(f"qmax={qmax} outside 1..10**4")
    if not 0.5 < sigma_min < 1:
        raise ParameterError(f"sigma_min={sigma_min} outside (0.5, 1)")
    rows = []
    for q in range(3, qmax + 1):
        for chi in real_primitive_characters(q):
            zeros = _real_zeros(chi, sigma_min)
            rows.append({
                "modulus": q,
                "exps": list(chi.exps),
                "parity": "even" if chi(-1) == 1 else "odd",
                "L1": float(l_values(chi, [1.0])[0].real),
                "real_zeros": zeros,
            })
    rows.sort(key=lambda r: (r["L1"], r["modulus"]))
    top = max(7, qmax.bit_length())
    powers = {str(1 << k): len(real_primitive_characters(1 << k)) for k in range(4, top + 1)}
    R = r_cutoff(N, c1)
    zeros = [(r["modulus"], z) for r in rows for z in r["real_zeros"]]
    # Case I holds iff 1 - beta < c0 / (2 log R), i.e. iff c0 > 2 log R (1 - beta)
    case_split = [{"modulus": q, "beta": b, "case_I_iff_c0_above": 2 * math.log(R) * (1 - b)}
                  for q, b in zeros]
    return {
        "qmax": qmax,
        "sigma_min": sigma_min,
        "count": len(rows),
        "ranking": rows,
        "min_L1": {"modulus": rows[0]["modulus"], "value": rows[0]["L1"]} if rows else None,
        "all_L1_positive": all(r["L1"] > 0 for r in rows),
        "real_zeros": case_split,
        "power_of_two_moduli": powers,
        "power_of_two_free": all(v == 0 for v in powers.values()),
        "exceptional_modulus_power_of_two": False,
        "note": "moduli 2**k (k >= 4) carry no real primitive character, so an exceptional "
                "real primitive character never has power-of-two modulus",
        "R": {"N": N, "c1": c1, "value": R, "case_I_threshold_per_c0": 1 / (2 * math.log(R))},
    }
