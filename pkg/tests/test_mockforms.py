"""Tests for the weakly holomorphic / mock modular assembly.

Frozen oracles and where they come from:

* g_weakly_holo(1, 8) = q^{-1} - 2 + 248 q^3 - 492 q^4 + 4119 q^7 - 7256 q^8:
  classical traces of J = j - 744 (the q^3 and q^4 columns are the j = 0 and
  j = 1728 CM points), rounded from class sums whose integrality residual is
  guarded below 1e-6 inside g_weakly_holo itself.
* f_weakly_holo(-3, 12) = q^{-3} - 248 q - 85995 q^5 + 1707264 q^8
  + 44330496 q^12: the weight-1/2 dual column; each entry equals the
  corresponding twisted trace and matches the g-side duality exactly.
* b(-3,-4) class-number component 192 pi H(3) H(4) = 32 pi: H(3) = 1/3,
  H(4) = 1/2.
* inner_prod_theta(-3) = -8 pi and inner_prod_theta(-4) = -12 pi:
  -24 pi H(|d|) with the same class numbers.
* (2/3) inner_prod_reg(D, d) = b_coeff_mock(D, d): algebraic identity of the
  two assembly paths (-12 sqrt(Dd) Tr* + 288 pi HH vs 192 pi HH
  - 8 sqrt(dD) Tr*); asserted near machine precision since both share one
  trace evaluation.
* Shadow seal: applying the weight-3/2 xi operator to the completed
  evaluator with the analytically continued head reproduces
  f_{-3}/(2 sqrt(3 pi)) to 1e-9 at an interior point.  This locks the head
  normalization (-i against the continued gamma), the sign and scale of the
  negative-index coefficients, and the square-term column against the
  integer traces of f_{-3} in a single equation.  The radial head fails the
  same identity at order one, which is the quantitative content of the
  radial-vs-continued convention note on kminus_eval.
* Weight-3/2 transformation under tau -> tau/(4 tau + 1): with
  head="continued" and diagonal="column" the full complex functional
  equation closes to a few parts in 10^4 (windowing accuracy of the
  derivative columns).  With the default literal/radial reading the
  weighted-absolute-value comparison at the reflection pair
  -1/4 + i/4 <-> 1/4 + i/4 misses by 7.0e-3; that number is pinned as a
  regression sentinel because it measures exactly the real part
  -2 sqrt(pi) e^{-6 pi y} cos(6 pi x) that the radial head fails to cancel.
* Decay profile: on the imaginary axis the slowest kminus_eval mode is the
  shared |n| = 1 profile Gamma(-1/2, 4 pi y) e^{2 pi y} ~ e^{-2 pi y}
  (4 pi y)^{-3/2}, so the measured Y = 2 vs Y = 3 ratio over the profile
  prediction sits at 0.98 (the deviation is the next order of the
  incomplete-gamma asymptotic, not a tuning constant).
"""

import mpmath as mp
import pytest

from cyclotrace.mockforms import (
    MockCoeff,
    TaggedSeries,
    b_coeff_mock,
    constant_term_check,
    eo_recombine,
    eo_split,
    f_weakly_holo,
    g_weakly_holo,
    inner_prod_reg,
    inner_prod_theta,
    k_eval,
    kminus_eval,
    kplus_series,
    zagier_eisenstein,
    KMINUS_MIN_IM,
)
from cyclotrace.poincare import xi_op
from cyclotrace.qseries import QSeries, evaluate, _to_mp

mp = mp.mp
mp.prec = 256

# Light but converged parameters shared by the evaluator tests; the
# windowed coefficients here agree with the c_max = 40000 defaults to a few
# parts in 1e4, which is tighter than every tolerance below.
FAST = dict(c_max=4000, window=400)

GAMMA = (1, 0, 4, 1)  # tau -> tau / (4 tau + 1)


def _gamma_apply(tau):
    return tau / (4 * tau + 1)


def _j3(tau):
    return (4 * tau + 1) ** (mp.mpf(3) / 2)


class TestGeneratingSeries:
    def test_g1_frozen_row(self):
        g = g_weakly_holo(1, 8)
        assert [(n, g.coeff(n)) for n in (-1, 0, 3, 4, 7, 8)] == [
            (-1, 1), (0, -2), (3, 248), (4, -492), (7, 4119), (8, -7256)]

    def test_g_nonsquare_has_no_constant(self):
        g = g_weakly_holo(5, 4)
        assert g.coeff(0) == 0

    def test_f_frozen_column_and_provenance(self):
        f = f_weakly_holo(-3, 12)
        assert isinstance(f, TaggedSeries)
        assert [(n, f.series.coeff(n)) for n in (-3, 1, 5, 8, 12)] == [
            (-3, 1), (1, -248), (5, -85995), (8, 1707264), (12, 44330496)]
        assert f.provenance[-3] == "head"
        assert f.provenance[4] == "unavailable"
        assert f.provenance[9] == "unavailable"
        assert f.series.coeff(4) == 0

    def test_duality_table_is_exact(self):
        for d in (-3, -4, -7, -8):
            f = f_weakly_holo(d, 12).series
            for D in (1, 5, 8, 12):
                g = g_weakly_holo(D, 8)
                assert g.coeff(abs(d)) == -f.coeff(D)

    def test_g_rejects_nonfundamental_positive(self):
        with pytest.raises(ValueError):
            g_weakly_holo(9, 4)
        with pytest.raises(ValueError):
            g_weakly_holo(-3, 4)

    def test_f_rejects_positive(self):
        with pytest.raises(ValueError):
            f_weakly_holo(3, 4)


class TestMockCoefficients:
    def test_class_number_component(self):
        b = b_coeff_mock(-3, -4, **FAST)
        assert abs(b.class_number_term - 32 * mp.pi) < mp.mpf("1e-70")

    def test_symmetry_in_the_two_discriminants(self):
        b1 = b_coeff_mock(-3, -4, **FAST)
        b2 = b_coeff_mock(-4, -3, **FAST)
        assert abs(b1.value - b2.value) <= 1e-3 * abs(b1.value)

    def test_value_recomputed_from_components(self):
        b = b_coeff_mock(-3, -4, **FAST)
        manual = b.class_number_term \
            - 8 * mp.sqrt(mp.mpf(12)) * b.trace_term
        assert abs(b.value - manual) == 0

    def test_relation_to_g_through_kplus(self):
        b = b_coeff_mock(-4, -3, **FAST)
        kp = kplus_series(-3, N=8, **FAST)
        lhs = 2 * mp.sqrt(3 * mp.pi) * kp.coeff(4)
        assert abs(lhs - b.value) <= 1e-3 * abs(b.value)


class TestInnerProducts:
    def test_theta_pairings_are_exact(self):
        assert abs(inner_prod_theta(-3) + 8 * mp.pi) < mp.mpf("1e-70")
        assert abs(inner_prod_theta(-4) + 12 * mp.pi) < mp.mpf("1e-70")

    def test_theta_rejects_positive(self):
        with pytest.raises(ValueError):
            inner_prod_theta(4)

    def test_two_thirds_identity_with_b(self):
        ip = inner_prod_reg(-3, -4, **FAST)
        b = b_coeff_mock(-3, -4, **FAST)
        assert abs(mp.mpf(2) / 3 * ip - b.value) <= mp.mpf("1e-70")


class TestKPlusSeries:
    def test_constant_and_head_coefficients(self):
        kp = kplus_series(-3, N=8, **FAST)
        assert abs(kp.coeff(0) + 8 * mp.sqrt(mp.pi / 3) / 3) < mp.mpf("1e-70")
        head = kp.coeff(3)
        assert abs(head + 2 * mp.sqrt(mp.pi) * mp.mpc(0, 1)) < mp.mpf("1e-70")

    def test_column_diagonal_adds_real_part_only(self):
        lit = kplus_series(-3, N=8, **FAST)
        col = kplus_series(-3, N=8, diagonal="column", **FAST)
        diff = col.coeff(3) - lit.coeff(3)
        assert abs(mp.im(diff)) < 1e-6 * abs(diff)
        assert 20 < mp.re(diff) < 24
        for n in (0, 4, 7, 8):
            assert col.coeff(n) == lit.coeff(n)

    def test_rejects_nonfundamental_and_bad_diagonal(self):
        with pytest.raises(ValueError):
            kplus_series(-12, N=8, **FAST)
        with pytest.raises(ValueError):
            kplus_series(-3, N=8, diagonal="both", **FAST)


class TestKMinusEval:
    def test_decay_profile_on_imaginary_axis(self):
        vals = {}
        for Y in (2, 3):
            vals[Y] = abs(kminus_eval(-3, mp.mpc(0, Y), **FAST))
        profile = lambda Y: mp.exp(-2 * mp.pi * Y) * mp.mpf(Y) ** (-1.5)
        ratio = (vals[2] / vals[3]) / (profile(2) / profile(3))
        assert 0.5 < ratio < 2

    def test_height_floor_and_head_validation(self):
        with pytest.raises(ValueError):
            kminus_eval(-3, mp.mpc(0, KMINUS_MIN_IM / 2), **FAST)
        with pytest.raises(ValueError):
            kminus_eval(-3, mp.mpc(0, 1), head="absolute", **FAST)
        with pytest.raises(ValueError):
            kminus_eval(3, mp.mpc(0, 1), **FAST)

    def test_continued_head_changes_only_the_head_mode(self):
        tau = mp.mpc("0.1", "0.6")
        rad = kminus_eval(-3, tau, **FAST)
        con = kminus_eval(-3, tau, head="continued", **FAST)
        y = mp.im(tau)
        q3 = mp.expjpi(6 * mp.re(tau)) * mp.exp(-6 * mp.pi * y)
        expected = -mp.mpc(0, 1) * q3 * (
            mp.gammainc(mp.mpf(-1) / 2, -12 * mp.pi * y)
            - mp.gammainc(mp.mpf(-1) / 2, 12 * mp.pi * y))
        assert abs((con - rad) - expected) < mp.mpf("1e-70")


class TestHarmonicityAndShadow:
    TAU = mp.mpc("0.13", "0.9")

    def test_weight_three_halves_harmonicity(self):
        kfun = lambda t: k_eval(-3, t, N=16, **FAST)
        lap = xi_op(mp.mpf(1) / 2,
                    lambda t: xi_op(mp.mpf(3) / 2, kfun, t), self.TAU)
        assert abs(lap) < 1e-10 * abs(kfun(self.TAU))

    def test_shadow_is_f_over_2_sqrt_3pi(self):
        kfun = lambda t: k_eval(-3, t, N=16, head="continued", **FAST)
        xi = xi_op(mp.mpf(3) / 2, kfun, self.TAU)
        f = f_weakly_holo(-3, 16).series
        target = evaluate(f, self.TAU, alpha=6.0).value \
            / (2 * mp.sqrt(3 * mp.pi))
        assert abs(xi - target) < 1e-9 * abs(target)

    def test_radial_head_fails_the_shadow_identity(self):
        kfun = lambda t: k_eval(-3, t, N=16, **FAST)
        xi = xi_op(mp.mpf(3) / 2, kfun, self.TAU)
        f = f_weakly_holo(-3, 16).series
        target = evaluate(f, self.TAU, alpha=6.0).value \
            / (2 * mp.sqrt(3 * mp.pi))
        assert abs(xi - target) > 0.5 * abs(target)


class TestModularity:
    def test_completed_reading_closes_the_functional_equation(self):
        for tau0 in (mp.mpc("-0.21", "0.25"), mp.mpc("-0.18", "0.21")):
            tau1 = _gamma_apply(tau0)
            lhs = k_eval(-3, tau1, N=16, head="continued",
                         diagonal="column", **FAST)
            rhs = _j3(tau0) * k_eval(-3, tau0, N=16, head="continued",
                                     diagonal="column", **FAST)
            assert abs(lhs - rhs) <= 1e-3 * abs(rhs)

    def test_literal_reading_sentinel_at_reflection_pair(self):
        tau0 = mp.mpc("-0.25", "0.25")
        tau1 = _gamma_apply(tau0)
        a0 = abs(k_eval(-3, tau0, N=16, **FAST)) * mp.im(tau0) ** mp.mpf(0.75)
        a1 = abs(k_eval(-3, tau1, N=16, **FAST)) * mp.im(tau1) ** mp.mpf(0.75)
        rel = abs(a0 - a1) / a0
        assert 5e-3 < rel < 9e-3

    def test_continued_coefficients_are_real_up_to_reflection(self):
        # gamma maps -conj(tau) to -conj(gamma tau) for this gamma, so a
        # form with real Fourier coefficients satisfies
        # |k(-1/4 + i/4)| = |k(1/4 + i/4)| exactly; the continued reading
        # restores that realness (the literal -2 sqrt(pi) i q^3 breaks it).
        tau0 = mp.mpc("-0.25", "0.25")
        tau1 = _gamma_apply(tau0)
        a0 = abs(k_eval(-3, tau0, N=16, head="continued",
                        diagonal="column", **FAST))
        a1 = abs(k_eval(-3, tau1, N=16, head="continued",
                        diagonal="column", **FAST))
        assert abs(a0 - a1) <= 1e-3 * a0


class TestEisensteinAndSplit:
    def test_hurwitz_coefficients(self):
        E = zagier_eisenstein(12)
        assert E.coeff(0) == -mp.mpf(1) / 12 or str(E.coeff(0)) == "-1/12"
        assert E.coeff(3) * 3 == 1
        assert E.coeff(4) * 2 == 1
        assert E.coeff(12) * 3 == 4

    def test_eo_split_supports_and_phases(self):
        E = zagier_eisenstein(8)
        even, odd = eo_split(E)
        for n in range(0, 9):
            if n % 2 == 0:
                assert odd.coeff(n) == 0
            else:
                assert even.coeff(n) == 0
        c3 = odd.coeff(3)
        expect = _to_mp(E.coeff(3)) * mp.expjpi(mp.mpf(3) / 4)
        assert abs(c3 - expect) < mp.mpf("1e-70")

    def test_eo_recombine_round_trip(self):
        E = zagier_eisenstein(12)
        back = eo_recombine(*eo_split(E))
        for n in range(0, 13):
            assert abs(_to_mp(back.coeff(n)) - _to_mp(E.coeff(n))) \
                < mp.mpf("1e-70")

    def test_split_requires_support_tag(self):
        with pytest.raises(ValueError):
            eo_split(QSeries(0, [1, 2, 3], None, exact_tail=True))


class TestConstantTermCheck:
    def test_half_weighting_wins(self):
        rep = constant_term_check(-3, -4, N=12, **FAST)
        assert rep.matches == "half"
        assert rep.imag_magnitude < 1e-30
        assert abs(rep.with_half - rep.target) <= 1e-6 * abs(rep.target)
        assert abs(rep.with_full - rep.target) > 1e-3 * abs(rep.target)

    def test_winner_stable_in_truncation(self):
        assert constant_term_check(-3, -4, N=16, **FAST).matches == "half"

    def test_range_validation(self):
        with pytest.raises(ValueError):
            constant_term_check(-4, -3, N=2, **FAST)
