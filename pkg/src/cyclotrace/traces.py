"""Traces of the weight-0 basis function over quadratic-form classes.

Three families:

* CM traces: character-weighted sums of J = j - 744 over the stabilizer-
  weighted classes of a negative discriminant, evaluated at arbitrary
  precision from the q-expansion with a rigorous tail bound.
* Cycle traces: for positive non-square discriminants, the class sum of
  integrals of J along the closed geodesic attached to each form, computed
  in the hyperbolic arc-length parameter where the measure is flat.
* Modified traces Tr* for two negative discriminants, where the naive class
  sum vanishes by the character's sign-flip under Q -> -Q.  Three routes:
  a Salie-sum series with a closed-form Bessel kernel, the equivalent
  Kloosterman-Bessel coefficient series, and the s-derivative route through
  the weight-3/2 coefficient series (the default; the others serve as
  cross-checks).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp
from scipy import special as _sp

from ._kernels import salie_batch
from .arithmetic import (
    automorph,
    class_list_definite,
    class_list_indefinite,
    cm_point,
    genus_character,
    is_discriminant,
    is_fundamental,
)
from .config import ConvergenceError, working_precision
from .poincare import DEFAULT_B_C_MAX, DEFAULT_WINDOW, _windowed, bcoeff, bcoeff_ds
from .qseries import evaluate as q_evaluate
from .qseries import faber

__all__ = [
    "TraceResult",
    "trace_cm",
    "trace_cycle",
    "trace_star_series",
    "trace_star_salie",
    "trace_star_jhat",
]

_METHODS = ("cm", "cycle", "salie-series", "kloosterman-series",
            "jhat-derivative")


@dataclass(frozen=True)
class TraceResult:
    """A trace value with its computation route and error metadata."""
    value: object
    method: str
    error_estimate: object
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError("unknown method %r" % (self.method,))


def _cm_precision(abs_dD):
    """Mantissa bits for CM evaluation: scale of J at the dominant class
    (log2 e^(pi sqrt|dD|)) with a 1.2 factor and 64 guard bits."""
    return int(math.ceil(1.2 * math.pi * math.sqrt(abs_dD) / math.log(2))) + 64


def _reduce_modular(tau, max_steps=512):
    """Move tau into the standard fundamental domain by T and S steps.

    Geodesic arcs of forms with a large automorph descend to heights where
    the q-series is useless (Im tau ~ 1e-3 needs ~5e4 terms); J is fully
    modular-invariant, so evaluation always happens at the reduced point,
    where Im tau >= sqrt(3)/2 and a few dozen terms suffice.
    """
    for _ in range(max_steps):
        tau = tau - mp.nint(mp.re(tau))
        if mp.re(tau) ** 2 + mp.im(tau) ** 2 < 1 - mp.mpf(2) ** -40:
            tau = -1 / tau
        else:
            return tau
    raise ConvergenceError("modular reduction did not terminate",
                           im_tau=float(mp.im(tau)))


def _eval_J(tau, tol, n_start=32):
    """J = j - 744 at tau with tail bound < tol, growing N as needed."""
    tau = _reduce_modular(tau)
    n = n_start
    for _ in range(16):
        try:
            r = q_evaluate(faber(1, n), tau, tol=tol)
            return r.value, r.tail_bound
        except ConvergenceError as exc:
            suggested = exc.diagnostics.get("suggested_n", 2 * n)
            n = min(max(int(suggested), 2 * n), 10 ** 6)
    raise ConvergenceError("q-series length for J did not stabilize",
                           im_tau=float(mp.im(tau)), last_n=n)


def _twist_character(D, Q):
    return 1 if D == 1 else genus_character(D, Q)


def trace_cm(d, D=1):
    """Character-twisted trace of J over classes of discriminant d*D < 0.

    (1/sqrt(D)) * sum over classes Q of disc d*D of chi_D(Q) J(tau_Q) / w_Q,
    with w_Q the stabilizer order.  For D = 1 the character is trivially 1
    and the value is the classical integer trace of singular moduli.
    """
    d, D = int(d), int(D)
    if d >= 0 or not is_discriminant(d):
        raise ValueError("d must be a negative discriminant")
    if D != 1 and (D < 0 or not is_fundamental(D)):
        raise ValueError("D must be 1 or a positive fundamental discriminant")
    if not is_discriminant(d * D):
        raise ValueError("d*D must be a discriminant")
    prec = _cm_precision(abs(d * D))
    with working_precision(prec):
        tol = mp.mpf(2) ** -60
        cl = class_list_definite(d * D)
        total = mp.mpc(0)
        tail_sum = mp.mpf(0)
        for Q, w in zip(cl.forms, cl.stabilizers):
            chi = _twist_character(D, Q)
            if chi == 0:
                continue
            J, tail = _eval_J(cm_point(Q), tol)
            total += mp.mpf(chi) * J / w
            tail_sum += tail / w
        total /= mp.sqrt(D)
        value = mp.re(total)
        err = tail_sum / mp.sqrt(D) + abs(mp.im(total))
        # re-round into the caller's precision context
        value = +value
        err = +err
    return TraceResult(value, "cm", err,
                       {"precision": prec, "classes": len(cl.forms),
                        "discriminant": d * D})


# ---------------------------------------------------------------------------
# Cycle-integral traces (positive non-square discriminant)
# ---------------------------------------------------------------------------

def _mobius(M, tau):
    (p, q), (r, s) = M
    return (p * tau + q) / (r * tau + s)


def _circle_angle(tau, center, radius):
    w = (tau - center) / radius
    theta = mp.atan2(mp.im(w), mp.re(w))
    if theta <= 0:  # the geodesic semi-circle has 0 < theta < pi
        raise ValueError("point left the geodesic semi-circle")
    return theta


def _cycle_integral(Q, tol, base_angle=None, maxdegree=6):
    """Integral of J(tau) dtau / Q(tau,1) along one period of the geodesic.

    On the semi-circle tau(theta) = c0 + r e^(i theta) the measure is
    sgn(a) dtheta / (sqrt(Delta) sin theta); substituting the arc-length
    parameter u = log tan(theta/2) flattens it to sgn(a) du / sqrt(Delta).
    The period runs from a base point to its image under the automorph
    generator, integrated by adaptive Gauss-Legendre quadrature.
    """
    delta = Q.disc
    sqd = mp.sqrt(delta)
    c0 = mp.mpf(-Q.b) / (2 * Q.a)
    radius = sqd / (2 * abs(Q.a))
    theta0 = mp.pi / 2 if base_angle is None else mp.mpf(base_angle)
    if not 0 < theta0 < mp.pi:
        raise ValueError("base angle must lie in (0, pi)")
    tau0 = c0 + radius * mp.expjpi(theta0 / mp.pi)
    tau1 = _mobius(automorph(Q), tau0)
    theta1 = _circle_angle(tau1, c0, radius)
    u0 = mp.log(mp.tan(theta0 / 2))
    u1 = mp.log(mp.tan(theta1 / 2))

    def integrand(u):
        theta = 2 * mp.atan(mp.e ** u)
        tau = c0 + radius * mp.expjpi(theta / mp.pi)
        val, _ = _eval_J(tau, tol)
        return val

    segments = max(1, int(mp.ceil(abs(u1 - u0) / mp.mpf(2))))
    points = [u0 + (u1 - u0) * k / segments for k in range(segments + 1)]
    integral, quad_err = mp.quad(integrand, points, method="gauss-legendre",
                                 maxdegree=maxdegree, error=True)
    return mp.sign(Q.a) * integral / sqd, quad_err / abs(sqd)


def trace_cycle(d, D=1, base_angle=None, maxdegree=6):
    """Class sum of cycle integrals of J for discriminant d*D > 0 non-square.

    (1/2 pi) * sum over classes of chi_D(Q) times the period integral of
    J(tau) dtau / Q(tau, 1) along the closed geodesic of Q.
    """
    d, D = int(d), int(D)
    if d <= 0 or not is_discriminant(d):
        raise ValueError("d must be a positive discriminant")
    if D != 1 and (D < 0 or not is_fundamental(D)):
        raise ValueError("D must be 1 or a positive fundamental discriminant")
    delta = d * D
    if not is_discriminant(delta):
        raise ValueError("d*D must be a discriminant")
    root = math.isqrt(delta)
    if root * root == delta:
        raise ValueError("d*D must be non-square")
    prec = _cm_precision(delta)
    with working_precision(prec):
        tol = mp.mpf(2) ** -60
        total = mp.mpc(0)
        err = mp.mpf(0)
        reps = class_list_indefinite(delta).forms
        for Q in reps:
            chi = _twist_character(D, Q)
            if chi == 0:
                continue
            val, qerr = _cycle_integral(Q, tol, base_angle, maxdegree)
            total += chi * val
            err += abs(qerr)
        total /= 2 * mp.pi
        value = +mp.re(total)
        err = +(err / (2 * mp.pi) + abs(mp.im(total)))
    return TraceResult(value, "cycle", err,
                       {"precision": prec, "classes": len(reps),
                        "discriminant": delta, "maxdegree": maxdegree})


# ---------------------------------------------------------------------------
# Modified traces for two negative discriminants
# ---------------------------------------------------------------------------

def _validate_star_pair(d, D):
    d, D = int(d), int(D)
    if d >= 0 or not is_discriminant(d):
        raise ValueError("d must be a negative discriminant")
    if D >= 0 or not is_fundamental(D):
        raise ValueError("D must be a negative fundamental discriminant")
    prod = d * D
    root = math.isqrt(prod)
    if root * root == prod:
        raise ValueError("d*D must be non-square")
    return d, D


def _star_prefactor(s):
    # 2^s Gamma(s/2)^2 / (2 pi Gamma(s)); equals 1 at s = 1.
    return 2 ** s * mp.gamma(s / 2) ** 2 / (2 * mp.pi * mp.gamma(s))


def trace_star_series(d, D, s, c_max=DEFAULT_B_C_MAX, window=DEFAULT_WINDOW):
    """Tr* of the Niebur series at s via the weight-3/2 coefficient series.

    Tr*(G_{-1}(., s)) = -(2^s Gamma(s/2)^2 / (2 pi Gamma(s)))
                        * b_{|D|}(|d|, s/2 + 1/4); vanishes at s = 1.
    """
    d, D = _validate_star_pair(d, D)
    s = mp.mpf(s)
    if not mp.mpf(3) / 4 < s <= mp.mpf("1.5"):
        raise ValueError("s must lie in (3/4, 1.5], got %s" % s)
    pref = _star_prefactor(s)
    r = bcoeff(abs(D), abs(d), s / 2 + mp.mpf(1) / 4, c_max, window)
    return TraceResult(-pref * r.value, "kloosterman-series",
                       abs(pref) * r.abs_error_estimate,
                       {"c_max": c_max, "window": window, "s": float(s),
                        "imag_magnitude": r.diagnostics["imag_magnitude"]})


def trace_star_salie(d, D, s, c_max=DEFAULT_B_C_MAX, window=DEFAULT_WINDOW,
                     tol=None):
    """Tr* of the Niebur series at s via the Salie-sum series.

    (1/(2 pi sqrt(dD))) * sum over 0 < c = 0 (mod 4) of S_{-1}(d, D; c)
    Phi(2 sqrt(dD)/c) with the closed-form kernel
    Phi(t) = pi t^(1/2) (2^s Gamma(s/2)^2/Gamma(s)) J_{s-1/2}(2 pi t),
    Cesaro-windowed like every conditionally convergent c-series here.
    """
    d, D = _validate_star_pair(d, D)
    s = mp.mpf(s)
    if not mp.mpf(3) / 4 < s <= mp.mpf("1.5"):
        raise ValueError("s must lie in (3/4, 1.5], got %s" % s)
    sf = float(s)
    dD = d * D
    cs = np.arange(4, c_max + 1, 4, dtype=np.int64)
    sal = salie_batch(-1, d, D, cs)
    t = 2 * math.sqrt(dD) / cs.astype(np.float64)
    pref_phi = (math.pi * 2 ** sf * float(mp.gamma(sf / 2)) ** 2
                / float(mp.gamma(sf)))
    phi = pref_phi * np.sqrt(t) * _sp.jv(sf - 0.5, 2 * math.pi * t)
    partial = np.cumsum(sal * phi / (2 * math.pi * math.sqrt(dD)))
    value, spread, imag_mag, w = _windowed(partial, window)
    if tol is not None and spread > tol:
        raise ConvergenceError(
            "windowed spread %.3e above tol %s in Salie trace series"
            % (spread, tol), d=d, D=D, s=sf, c_max=c_max, window=w,
            spread=spread)
    return TraceResult(mp.mpf(value), "salie-series", mp.mpf(spread),
                       {"c_max": c_max, "window": w, "s": sf,
                        "imag_magnitude": imag_mag})


def trace_star_jhat(d, D, h=1e-3, c_max=DEFAULT_B_C_MAX, window=DEFAULT_WINDOW,
                    check=False):
    """Tr* of the s-derivative series at s = 1 (the default route).

    Tr*_{d,D} = -(1/2) * d/ds[b_{|D|}(|d|, s)] at s = 3/4.
    """
    d, D = _validate_star_pair(d, D)
    r = bcoeff_ds(abs(D), abs(d), h=h, c_max=c_max, window=window, check=check)
    return TraceResult(-r.value / 2, "jhat-derivative",
                       r.abs_error_estimate / 2,
                       {"c_max": c_max, "window": window, "h": float(h),
                        "diagnostics": dict(r.diagnostics)})
