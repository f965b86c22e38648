"""Tests for the exact q-expansion engine and its evaluator."""

from fractions import Fraction

import pytest
from mpmath import mp

from cyclotrace.config import ConvergenceError
from cyclotrace.qseries import (
    PLUS_SUPPORT,
    QSeries,
    delta_series,
    div,
    eisenstein_e4,
    eisenstein_e6,
    evaluate,
    faber,
    j_invariant,
    mul,
    pow_series,
    theta_series,
)


# --- Laurent arithmetic ------------------------------------------------------------

def test_laurent_arithmetic_trivia():
    A = QSeries(-1, [1, 1])           # q^{-1} + 1
    B = QSeries(1, [1])               # q
    assert mul(A, B) == QSeries(0, [1, 1])          # 1 + q
    one_plus_q = QSeries(0, [1, 1, 0, 0])
    assert pow_series(one_plus_q, 3).coeffs[:4] == [1, 3, 3, 1]
    C = QSeries(0, [2, 5, 7, 1])
    assert div(C, C) == QSeries(0, [1, 0, 0, 0])


def test_mul_respects_consistent_length():
    # truncated factors: only the fully determined exponent range is kept
    A = QSeries(-1, [1, 0, 3, 4], exact_tail=False)   # through q^2
    B = QSeries(0, [1, 1], exact_tail=False)          # through q^1
    P = A * B
    assert P.v == -1
    # reliable exponents reach min(2 + 0, 1 + (-1)) = 0
    assert P.N == 0
    assert P.coeffs == [1, 1]
    assert not P.exact_tail
    # an exact polynomial factor does not limit the truncated one
    C = QSeries(1, [5])                               # the monomial 5q
    P2 = A * C
    assert P2.N == 3 and P2.coeffs == [5, 0, 15, 20]
    # two exact polynomials multiply in full
    full = QSeries(-1, [1, 2]) * QSeries(2, [3, 4])
    assert full.v == 1 and full.coeffs == [3, 10, 8]


def test_division_requires_invertible_lead():
    A = QSeries(0, [1, 2, 3])
    Z = QSeries(0, [0, 0, 0])
    with pytest.raises(ZeroDivisionError):
        div(A, Z)


def test_division_roundtrip_exact():
    A = QSeries(-2, [3, 1, 4, 1, 5, 9, 2, 6])
    B = QSeries(1, [2, 7, 1, 8, 2, 8])
    Q = (A * B) / B
    for n in range(Q.v, Q.N + 1):
        assert Q.coeff(n) == A.coeff(n) if n <= A.N else True


def test_coeff_read_past_length_raises():
    A = QSeries(0, [1, 2])
    assert A.coeff(-5) == 0
    with pytest.raises(ValueError):
        A.coeff(2)


def test_scalar_operations():
    A = QSeries(1, [2, 3])            # 2q + 3q^2
    assert (A + 1).coeff(0) == 1
    assert (A + 1).coeff(1) == 2
    assert (2 * A).coeffs == [4, 6]
    assert (A - A) == QSeries(1, [0, 0])
    half = A / 2
    assert half.coeffs == [1, Fraction(3, 2)]


# --- classical series ----------------------------------------------------------------

def test_eisenstein_leading_terms():
    e4 = eisenstein_e4(3)
    assert e4.coeffs == [1, 240, 2160, 6720]
    e6 = eisenstein_e6(3)
    assert e6.coeffs == [1, -504, -16632, -122976]


def test_delta_matches_eta_product():
    # independent oracle: q prod_{n>=1} (1 - q^n)^24
    N = 40
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    for n in range(1, N + 1):
        # multiply by (1 - q^n)^24 one factor at a time
        for _ in range(24):
            for k in range(N, n - 1, -1):
                coeffs[k] -= coeffs[k - n]
    eta24 = QSeries(1, coeffs[:N])
    d = delta_series(N)
    assert d.trim() == eta24.trim()
    assert d.coeff(1) == 1 and d.coeff(2) == -24 and d.coeff(3) == 252
    assert d.coeff(4) == -1472 and d.coeff(5) == 4830


def test_j_invariant_coefficients():
    j = j_invariant(6)
    assert j.v == -1
    assert j.coeff(-1) == 1
    assert j.coeff(0) == 744
    assert j.coeff(1) == 196884
    assert j.coeff(2) == 21493760
    assert j.coeff(3) == 864299970
    with pytest.raises(ValueError):
        j_invariant(0)


def test_faber_first_elements():
    J = faber(1, 8)
    assert J.coeff(-1) == 1 and J.coeff(0) == 0
    assert J.coeff(1) == 196884
    f2 = faber(2, 8)
    assert f2.coeff(-2) == 1 and f2.coeff(-1) == 0 and f2.coeff(0) == 0
    assert f2.coeff(1) == 42987520


def test_faber2_matches_polynomial_in_j_oracle():
    # independent route: j^2 - 1488 j, constant term removed
    N = 30
    j = j_invariant(N + 1)
    poly = j * j - 1488 * j
    poly = poly - poly.coeff(0)
    f2 = faber(2, N)
    for n in range(-2, N + 1):
        assert f2.coeff(n) == poly.coeff(n), n


def test_faber_normalization_and_integrality():
    for m in range(1, 21):
        f = faber(m, 100)
        assert f.coeff(-m) == 1
        for k in range(1, m):
            assert f.coeff(-k) == 0, (m, k)
        assert f.coeff(0) == 0
        assert all(isinstance(c, int) for c in f.coeffs), m


def test_theta_series():
    th = theta_series(10)
    assert th.coeff(0) == 1
    assert th.coeff(1) == 2
    assert th.coeff(3) == 0
    assert th.coeff(4) == 2
    assert th.coeff(9) == 2
    assert th.support == PLUS_SUPPORT[Fraction(1, 2)]


def test_support_tag_validation():
    with pytest.raises(ValueError):
        QSeries(0, [1, 0, 5, 0], PLUS_SUPPORT[Fraction(1, 2)])  # q^2 term
    tagged = QSeries(0, [1, 2, 0, 0, 7], PLUS_SUPPORT[Fraction(1, 2)])
    assert (3 * tagged).support == tagged.support
    # generic ring ops drop the tag rather than claiming support
    assert (tagged + tagged).support is None


# --- evaluation -----------------------------------------------------------------------

def test_evaluate_j_at_i_is_1728():
    with mp.workprec(128):
        j = j_invariant(40)
        res = evaluate(j, mp.mpc(0, 1))
        assert res.tail_bound < mp.mpf('1e-20')
        assert abs(res.value - 1728) < res.tail_bound + mp.mpf('1e-25')
        # independent oracle: 1728 E4^3 / (E4^3 - E6^2) from the weight-4/6 series
        e4 = evaluate(eisenstein_e4(60), mp.mpc(0, 1)).value
        e6 = evaluate(eisenstein_e6(60), mp.mpc(0, 1)).value
        oracle = 1728 * e4 ** 3 / (e4 ** 3 - e6 ** 2)
        assert abs(res.value - oracle) < mp.mpf('1e-18')


def test_evaluate_j_at_rho_vanishes():
    with mp.workprec(128):
        j = j_invariant(40)
        rho = mp.mpc(1, mp.sqrt(3)) / 2
        res = evaluate(j, rho)
        assert abs(res.value) < res.tail_bound + mp.mpf('1e-20')


def test_evaluate_theta_real_positive():
    th = theta_series(30)
    res = evaluate(th, mp.mpc(0, 2))
    assert abs(res.value.imag) < mp.mpf('1e-40')
    assert res.value.real > 1


def test_evaluate_scale_quarter():
    A = QSeries(0, [1, 1])
    tau = mp.mpc(0.3, 0.9)
    res = evaluate(A, tau, scale=Fraction(1, 4))
    expected = 1 + mp.expjpi(tau / 2)
    assert abs(res.value - expected) < mp.mpf('1e-30')


def test_evaluate_gamma_invariance_of_j():
    with mp.workprec(192):
        j = j_invariant(60)
        for tau in (mp.mpc(0, 2), mp.mpc(1, 1), mp.mpc(0.5, 1.5)):
            a = evaluate(j, tau)
            b = evaluate(j, -1 / tau)
            assert abs(a.value - b.value) < a.tail_bound + b.tail_bound + \
                mp.mpf('1e-25'), tau


def test_evaluate_rejects_lower_half_plane():
    j = j_invariant(5)
    with pytest.raises(ValueError):
        evaluate(j, mp.mpc(0, -1))
    with pytest.raises(ValueError):
        evaluate(j, mp.mpc(0, 1), scale=0)


def test_evaluate_tail_tolerance_failure():
    j = j_invariant(10)
    with pytest.raises(ConvergenceError) as exc:
        evaluate(j, mp.mpc(0, 0.4), tol=mp.mpf('1e-12'))
    assert exc.value.diagnostics["suggested_n"] > 10


def test_evaluate_divergent_envelope_failure():
    j = j_invariant(10)
    with pytest.raises(ConvergenceError):
        evaluate(j, mp.mpc(0, 0.05))


def test_evaluate_custom_envelope_is_more_conservative():
    j = j_invariant(25)
    loose = evaluate(j, mp.mpc(0, 1.2))
    tight = evaluate(j, mp.mpc(0, 1.2), alpha=6 * mp.pi)
    assert tight.tail_bound > loose.tail_bound
    assert abs(loose.value - tight.value) == 0


def test_json_entries():
    A = QSeries(-1, [1, 0, Fraction(1, 2), 3])
    entries = A.json_entries()
    assert entries[0] == {"n": -1, "coeff": "1"}
    assert entries[1] == {"n": 0, "coeff": "0"}
    assert entries[3]["n"] == 2
    assert float(entries[2]["coeff"]) == 0.5
