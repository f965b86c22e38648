"""Tests for exact exponential sums and the batch kernels."""

import math
from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from cyclotrace import _kernels
from cyclotrace.kloosterman import (
    kloosterman_half,
    kloosterman_int,
    kloosterman_plus,
    salie,
    salie_root_count,
)

EPS = mp.mpf(2) ** (-200)


def _phi(c):
    return sum(1 for v in range(1, c + 1) if math.gcd(v, c) == 1)


# --- integral weight -----------------------------------------------------------

def test_kloosterman_int_zero_frequencies_give_totient():
    for c in (1, 2, 3, 4, 10, 12, 36, 50):
        val = kloosterman_int(0, 0, c)
        assert abs(val - _phi(c)) < EPS, c


def test_kloosterman_int_direct_small_case():
    assert abs(kloosterman_int(1, 1, 2) - 1) < EPS


def test_kloosterman_int_symmetry():
    for c in range(1, 51):
        for (m, n) in ((1, 2), (3, 5), (-2, 7), (0, 3)):
            a = kloosterman_int(m, n, c)
            b = kloosterman_int(n, m, c)
            assert abs(a - b) < EPS, (m, n, c)


def test_kloosterman_int_classical_value():
    # c prime: direct evaluation against a naive mpmath double loop
    for c in (5, 7, 13):
        naive = mp.fsum(
            mp.expjpi(mp.mpf(2 * ((pow(v, -1, c) + v) % c)) / c)
            for v in range(1, c))
        assert abs(kloosterman_int(1, 1, c) - naive) < EPS


def test_kloosterman_int_rejects_bad_modulus():
    with pytest.raises(ValueError):
        kloosterman_int(1, 1, 0)


# --- half-integral weight --------------------------------------------------------

def test_kloosterman_half_examples():
    v1 = kloosterman_half(Fraction(1, 2), 0, 0, 4)
    assert abs(v1 - mp.mpc(1, 1)) < EPS
    v2 = kloosterman_half(Fraction(1, 2), -4, -3, 4)
    assert abs(v2 - mp.mpc(1, 1)) < EPS


def test_kloosterman_half_weight_domain():
    with pytest.raises(ValueError):
        kloosterman_half(Fraction(5, 2), 0, 0, 4)
    with pytest.raises(ValueError):
        kloosterman_half(Fraction(1, 2), 0, 0, 6)


def test_weight_three_half_relation_exhaustive():
    # K_{3/2}(m,n;c) = -i K_{1/2}(-m,-n;c) on the full acceptance grid
    worst = mp.mpf(0)
    for c in range(4, 65, 4):
        for m in range(-12, 13):
            for n in range(-12, 13):
                lhs = kloosterman_half(Fraction(3, 2), m, n, c)
                rhs = mp.mpc(0, -1) * kloosterman_half(
                    Fraction(1, 2), -m, -n, c)
                worst = max(worst, abs(lhs - rhs))
    assert worst < mp.mpf('1e-12')


def test_kloosterman_plus_examples():
    assert abs(kloosterman_plus(-4, -3, 4) - 4) < EPS
    assert abs(kloosterman_plus(0, 0, 4) - 4) < EPS


def test_kloosterman_plus_is_real_on_grid():
    worst = mp.mpf(0)
    for c in range(4, 33, 4):
        for m in range(-6, 7):
            for n in range(-6, 7):
                worst = max(worst, abs(kloosterman_plus(m, n, c).imag))
    assert worst < mp.mpf('1e-20')


# --- Salie sums --------------------------------------------------------------------

def test_salie_example():
    assert abs(salie(-1, -4, -3, 4) - 2) < EPS


def test_salie_trivial_bound_and_reality():
    for c in range(4, 33, 4):
        for (d, D) in ((-4, -3), (-3, -8), (-7, -4), (-3, 5)):
            val = salie(-1, d, D, c)
            assert abs(val) <= salie_root_count(d, D, c) + 1e-30
            assert abs(val.imag) < mp.mpf('1e-25'), (d, D, c)


def test_salie_rejects_bad_input():
    with pytest.raises(ValueError):
        salie(-1, -4, -3, 6)          # c not divisible by 4
    with pytest.raises(ValueError):
        salie(-1, -4, -12, 4)         # D not fundamental
    with pytest.raises(ValueError):
        salie(-1, -2, -3, 4)          # dD = 6 = 2 (mod 4)


def test_salie_kloosterman_factorization_m1():
    # K+(d, D; c) = sqrt(c) S_{-1}(d, D; c)
    worst = mp.mpf(0)
    for (d, D) in ((-4, -3), (-3, -8), (-7, -4)):
        for c in range(4, 65, 4):
            lhs = kloosterman_plus(d, D, c)
            rhs = mp.sqrt(c) * salie(-1, d, D, c)
            worst = max(worst, abs(lhs - rhs))
    assert worst < mp.mpf('1e-12')


def test_salie_factorization_general_m():
    # S_{-m}(d,D;c) = sum over n | (m, c/4) of (D/n) sqrt(n/c) K+(d, m^2 D/n^2; c/n)
    from cyclotrace.arithmetic import kronecker
    worst = mp.mpf(0)
    for (d, D) in ((-4, -3), (-3, -8)):
        for m in range(1, 5):
            for c in range(4, 65, 4):
                lhs = salie(-m, d, D, c)
                rhs = mp.mpc(0)
                for n in range(1, m + 1):
                    if m % n or (c // 4) % n:
                        continue
                    rhs += kronecker(D, n) * mp.sqrt(mp.mpf(n) / c) * \
                        kloosterman_plus(d, m * m * D // (n * n), c // n)
                worst = max(worst, abs(lhs - rhs))
    assert worst < mp.mpf('1e-12')


# --- batch kernels vs exact reference ------------------------------------------------

def test_batch_int_matches_exact():
    cs = np.array([1, 2, 3, 5, 8, 12, 30, 97, 128, 255], dtype=np.int64)
    for (m, n) in ((0, 0), (1, 1), (-1, 2), (3, -5)):
        batch = _kernels.kloosterman_int_batch(m, n, cs)
        for i, c in enumerate(cs):
            exact = kloosterman_int(m, n, int(c))
            assert abs(batch[i] - complex(exact)) < 1e-10, (m, n, c)


def test_batch_plus_matches_exact():
    cs = np.arange(4, 129, 4, dtype=np.int64)
    for (m, n) in ((-4, -3), (0, 0), (-3, -8), (5, 2)):
        batch = _kernels.kloosterman_plus_batch(m, n, cs)
        for i, c in enumerate(cs):
            exact = kloosterman_plus(m, n, int(c))
            assert abs(batch[i] - complex(exact)) < 1e-9, (m, n, c)


def test_batch_salie_matches_exact():
    cs = np.arange(4, 129, 4, dtype=np.int64)
    for (d, D) in ((-4, -3), (-3, -8), (-7, -4)):
        batch = _kernels.salie_batch(-1, d, D, cs)
        for i, c in enumerate(cs):
            exact = salie(-1, d, D, int(c))
            assert abs(batch[i] - complex(exact)) < 1e-9, (d, D, c)


def test_numpy_fallback_matches_numba_or_exact():
    # exercise the numpy code paths directly regardless of backend selection
    cs = np.array([4, 8, 12, 16, 36, 64, 100], dtype=np.int64)
    for (m, n) in ((-4, -3), (2, 5)):
        np_half = _kernels._kloosterman_half_batch_np(1, m, n, cs)
        for i, c in enumerate(cs):
            exact = kloosterman_half(Fraction(1, 2), m, n, int(c))
            assert abs(np_half[i] - complex(exact)) < 1e-9
    np_int = _kernels._kloosterman_int_batch_np(1, 2, np.array([5, 9, 20]))
    for i, c in enumerate((5, 9, 20)):
        assert abs(np_int[i] - complex(kloosterman_int(1, 2, c))) < 1e-10
    from cyclotrace.arithmetic import kronecker as kr
    table = np.array([kr(-3, r) for r in range(3)], dtype=np.int64)
    np_sal = _kernels._salie_batch_np(-1, -4, -3, cs, table)
    for i, c in enumerate(cs):
        assert abs(np_sal[i] - complex(salie(-1, -4, -3, int(c)))) < 1e-9


def test_batch_input_validation():
    with pytest.raises(ValueError):
        _kernels.kloosterman_half_batch(2, 0, 0, np.array([4]))
    with pytest.raises(ValueError):
        _kernels.kloosterman_half_batch(1, 0, 0, np.array([6]))
    with pytest.raises(ValueError):
        _kernels.salie_batch(-1, -4, -12, np.array([4]))
