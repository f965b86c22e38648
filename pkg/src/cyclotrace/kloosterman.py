"""Exponential sums, evaluated exactly: integral- and half-integral-weight
Kloosterman sums, the plus-space normalization K+, and Salie sums.

Each sum is collected as an integer histogram over phases e(r/c) (and unit
factors i^t), then evaluated at working precision; the only rounding happens
in the final root-of-unity combination.  Large-c batch summation for the
coefficient series lives in _kernels; this module is the accuracy reference.
"""

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import mp

from .arithmetic import QuadForm, genus_character, is_fundamental, kronecker


def _require_c(c, multiple_of_four=False):
    c = int(c)
    if c < 1:
        raise ValueError("modulus c must be positive")
    if multiple_of_four and c % 4 != 0:
        raise ValueError("modulus c must be divisible by 4, got %d" % c)
    return c


@lru_cache(maxsize=None)
def _unit_data(c):
    """[(v, v^{-1} mod c, (c/v))] over odd v coprime to c (4 | c)."""
    data = []
    for v in range(1, c, 2):
        if math.gcd(v, c) != 1:
            continue
        data.append((v, pow(v, -1, c), kronecker(c, v)))
    return tuple(data)


@lru_cache(maxsize=None)
def _coprime_data(c):
    """[(v, v^{-1} mod c)] over all v coprime to c."""
    data = []
    for v in range(1, c + 1):
        if math.gcd(v, c) == 1:
            data.append((v % c, pow(v, -1, c)))
    return tuple(data)


@lru_cache(maxsize=512)
def _phase_table_at(c, prec):
    with mp.workprec(prec):
        return {r: mp.expjpi(mp.mpf(2 * r) / c) for r in range(c)}


def _phase_table(c):
    """{r: e(r/c)} at the current working precision (cached per precision)."""
    return _phase_table_at(c, mp.prec)


def _histogram_value(counts, c):
    """Sum counts[r] * e(r/c) exactly from integer counts."""
    table = _phase_table(c)
    return mp.fsum(w * table[r] for r, w in counts.items() if w != 0)


def kloosterman_int(m, n, c):
    """K0(m, n; c) = sum over v coprime to c of e((m v^{-1} + n v)/c)."""
    c = _require_c(c)
    m, n = int(m), int(n)
    counts = {}
    for v, inv in _coprime_data(c):
        r = (m * inv + n * v) % c
        counts[r] = counts.get(r, 0) + 1
    return _histogram_value(counts, c)


def kloosterman_half(k, m, n, c):
    """Half-integral weight sum with theta multiplier, k in {1/2, 3/2}.

    K_k(m, n; c) = sum over odd v coprime to c of
    (c/v)^{2k} eps_v^{2k} e((m v^{-1} + n v)/c), with eps_v = 1 for
    v = 1 (mod 4) and eps_v = i for v = 3 (mod 4).
    """
    two_k = int(2 * Fraction(k))
    if two_k not in (1, 3):
        raise ValueError("weight k must be 1/2 or 3/2")
    c = _require_c(c, multiple_of_four=True)
    m, n = int(m), int(n)
    # counts[t][r] over unit i^t and phase e(r/c)
    counts = [{}, {}, {}, {}]
    for v, inv, jac in _unit_data(c):
        t = two_k % 4 if v % 4 == 3 else 0
        if jac == -1:
            t = (t + 2) % 4
        r = (m * inv + n * v) % c
        counts[t][r] = counts[t].get(r, 0) + 1
    total = mp.mpc(0)
    unit = mp.mpc(1)
    for t in range(4):
        if counts[t]:
            total += unit * _histogram_value(counts[t], c)
        unit *= mp.mpc(0, 1)
    return total


def kloosterman_plus(m, n, c):
    """K+(m, n; c) = (1 - i)(1 + (4/(c/4))) K_{1/2}(m, n; c)."""
    c = _require_c(c, multiple_of_four=True)
    factor = 1 + kronecker(4, c // 4)
    if factor == 0:
        return mp.mpc(0)
    return mp.mpc(1, -1) * factor * kloosterman_half(Fraction(1, 2), m, n, c)


def salie(m, d, D, c):
    """S_m(d, D; c): character-twisted sum over square roots of Dd mod c.

    S_m(d,D;c) = sum over b mod c with b^2 = Dd (mod c) of
    chi_D([c/4, b, (b^2 - Dd)/c]) e(2mb/c).
    """
    c = _require_c(c, multiple_of_four=True)
    m, d, D = int(m), int(d), int(D)
    if not is_fundamental(D):
        raise ValueError("D must be a fundamental discriminant")
    if (d * D) % 4 not in (0, 1):
        raise ValueError("dD must be a discriminant (0,1 mod 4)")
    Dd = D * d
    counts = {}
    for b in range(c):
        if (b * b - Dd) % c != 0:
            continue
        Q = QuadForm(c // 4, b, (b * b - Dd) // c)
        chi = genus_character(D, Q)
        if chi == 0:
            continue
        r = (2 * m * b) % c
        counts[r] = counts.get(r, 0) + chi
    if not counts:
        return mp.mpc(0)
    return _histogram_value(counts, c)


def salie_root_count(d, D, c):
    """#{b mod c : b^2 = Dd (mod c)} — the trivial bound for |S_m|."""
    c = _require_c(c, multiple_of_four=True)
    Dd = D * d
    return sum(1 for b in range(c) if (b * b - Dd) % c == 0)
