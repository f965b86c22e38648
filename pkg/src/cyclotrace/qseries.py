"""Exact Laurent q-expansions of classical modular objects plus evaluation.

Coefficients stay exact (int / Fraction) through all algebra; extended-precision
floats appear only in evaluate(), which also returns a rigorous tail bound.
"""

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from mpmath import mp

from .config import ConvergenceError

# Residue classes mod 4 carrying the coefficient support of half-integral
# weight forms: weight 1/2 lives on n = 0,1 (mod 4), weight 3/2 on n = 0,3.
PLUS_SUPPORT = {Fraction(1, 2): frozenset({0, 1}), Fraction(3, 2): frozenset({0, 3})}


def _is_exact(x):
    return isinstance(x, (int, Fraction))


class QSeries:
    """Laurent series sum_{n=v}^{N} c_n q^n with explicit computed length.

    exact_tail=True marks a finite Laurent polynomial (every coefficient
    beyond N is zero); exact_tail=False marks a truncation of an infinite
    series, and ring operations then only keep the exponent range that is
    fully determined by the computed coefficients.
    """

    __slots__ = ("v", "coeffs", "support", "exact_tail")

    def __init__(self, v, coeffs, support=None, exact_tail=True):
        self.v = int(v)
        self.coeffs = list(coeffs)
        self.exact_tail = bool(exact_tail)
        if not self.coeffs:
            raise ValueError("empty coefficient range")
        self.support = frozenset(support) if support is not None else None
        if self.support is not None:
            for n, c in self.items():
                if n % 4 not in self.support and c != 0:
                    raise ValueError(
                        "coefficient at q^%d breaks support mod 4 %s"
                        % (n, sorted(self.support)))

    # -- basic structure -------------------------------------------------

    @property
    def N(self):
        """Largest exponent with a computed coefficient."""
        return self.v + len(self.coeffs) - 1

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.v + i, c

    def coeff(self, n):
        """Coefficient of q^n; raises past the computed range."""
        if n > self.N:
            raise ValueError("coefficient q^%d beyond computed length N=%d"
                             % (n, self.N))
        if n < self.v:
            return 0
        return self.coeffs[n - self.v]

    def truncate(self, N):
        if N > self.N:
            raise ValueError("cannot extend series by truncation")
        dropped_zero = all(c == 0 for c in self.coeffs[N - self.v + 1:])
        return QSeries(self.v, self.coeffs[:N - self.v + 1], self.support,
                       self.exact_tail and dropped_zero)

    def trim(self):
        """Drop leading zero coefficients (normalizes the valuation)."""
        i = 0
        while i < len(self.coeffs) - 1 and self.coeffs[i] == 0:
            i += 1
        return QSeries(self.v + i, self.coeffs[i:], self.support,
                       self.exact_tail)

    def with_support(self, weight):
        return QSeries(self.v, self.coeffs, PLUS_SUPPORT[Fraction(weight)],
                       self.exact_tail)

    def is_exact(self):
        return all(_is_exact(c) for c in self.coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QSeries):
            # scalar: shifts only the constant term and keeps own length
            v = min(self.v, 0)
            out = []
            for n in range(v, self.N + 1):
                a = self.coeffs[n - self.v] if n >= self.v else 0
                out.append(a + other if n == 0 else a)
            return QSeries(v, out, exact_tail=self.exact_tail)
        if self.exact_tail and other.exact_tail:
            N = max(self.N, other.N)
        else:
            N = min(self.N if not self.exact_tail else other.N,
                    other.N if not other.exact_tail else self.N)
        v = min(self.v, other.v)
        out = []
        for n in range(v, N + 1):
            a = self.coeffs[n - self.v] if self.v <= n <= self.N else 0
            b = other.coeffs[n - other.v] if other.v <= n <= other.N else 0
            out.append(a + b)
        return QSeries(v, out,
                       exact_tail=self.exact_tail and other.exact_tail)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return QSeries(self.v, [-c for c in self.coeffs], self.support,
                       self.exact_tail)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self.__add__(other.__neg__())
        return self.__add__(-other)

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries(self.v, [c * other for c in self.coeffs],
                           self.support, self.exact_tail)
        # a truncated factor limits reliable product exponents: unknown
        # coefficients of A beyond N_A meet known zeros of B only while
        # n <= N_A + v_B (and symmetrically); exact tails lift the limit
        v = self.v + other.v
        limit_a = self.N + other.v if not self.exact_tail else None
        limit_b = other.N + self.v if not other.exact_tail else None
        if limit_a is None and limit_b is None:
            N = self.N + other.N
        else:
            N = min(x for x in (limit_a, limit_b) if x is not None)
        out = [0] * (N - v + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            base = self.v + i + other.v - v
            top = min(len(other.coeffs), len(out) - base)
            for j in range(top):
                b = other.coeffs[j]
                if b != 0:
                    out[base + j] += a * b
        return QSeries(v, out,
                       exact_tail=self.exact_tail and other.exact_tail)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            if _is_exact(other) and self.is_exact():
                other = Fraction(other)
                return QSeries(self.v,
                               [Fraction(c) / other for c in self.coeffs],
                               self.support, self.exact_tail)
            return QSeries(self.v, [c / other for c in self.coeffs],
                           self.support, self.exact_tail)
        other = other.trim()
        lead = other.coeffs[0]
        if lead == 0:
            raise ZeroDivisionError("division by series with zero leading "
                                    "coefficient")
        La = self.N - self.v
        Lb = other.N - other.v
        L = min(La, Lb)
        exact = self.is_exact() and other.is_exact() and _is_exact(lead)
        inv_lead = Fraction(1, 1) / Fraction(lead) if exact else 1 / lead
        qs = []
        for i in range(L + 1):
            acc = self.coeffs[i]
            for k in range(i):
                j = i - k
                if j <= Lb:
                    acc = acc - qs[k] * other.coeffs[j]
            qs.append(acc * inv_lead)
        if exact:
            qs = [int(c) if isinstance(c, Fraction) and c.denominator == 1
                  else c for c in qs]
        return QSeries(self.v - other.v, qs, exact_tail=False)

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative powers: divide explicitly")
        if k == 0:
            return QSeries(0, [1] + [0] * (self.N - self.v))
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self.trim(), other.trim()
        return a.v == b.v and a.coeffs == b.coeffs

    def __repr__(self):
        head = ", ".join("%s q^%d" % (c, n) for n, c in list(self.items())[:4])
        return "QSeries(%s, ..., N=%d)" % (head, self.N)

    # -- export ------------------------------------------------------------

    def json_entries(self):
        """[{n, coeff}] with coefficients rendered as decimal strings."""
        out = []
        for n, c in self.items():
            if isinstance(c, int):
                s = str(c)
            elif isinstance(c, Fraction):
                s = str(c.numerator) if c.denominator == 1 else \
                    mp.nstr(mp.mpf(c.numerator) / c.denominator, 30)
            else:
                s = mp.nstr(c, 30)
            out.append({"n": n, "coeff": s})
        return out


def mul(A, B):
    return A * B


def div(A, B):
    return A / B


def pow_series(A, k):
    return A ** k


# --- classical series -----------------------------------------------------------

def _sigma_table(k, N):
    """sigma_k(n) for 1 <= n <= N by divisor sieving."""
    table = [0] * (N + 1)
    for d in range(1, N + 1):
        dk = d ** k
        for n in range(d, N + 1, d):
            table[n] += dk
    return table


def eisenstein_e4(N):
    s3 = _sigma_table(3, max(N, 0))
    return QSeries(0, [1] + [240 * s3[n] for n in range(1, N + 1)],
                   exact_tail=False)


def eisenstein_e6(N):
    s5 = _sigma_table(5, max(N, 0))
    return QSeries(0, [1] + [-504 * s5[n] for n in range(1, N + 1)],
                   exact_tail=False)


def delta_series(N):
    """Discriminant cusp form (E4^3 - E6^2)/1728, exact integers."""
    e4 = eisenstein_e4(N)
    e6 = eisenstein_e6(N)
    diff = e4 ** 3 - e6 ** 2
    coeffs = []
    for n, c in diff.items():
        q, r = divmod(c, 1728)
        if r != 0:
            raise RuntimeError("discriminant coefficients must be divisible "
                               "by 1728 (cannot happen)")
        coeffs.append(q)
    return QSeries(diff.v, coeffs, exact_tail=False)


@lru_cache(maxsize=None)
def j_invariant(N):
    """q^{-1} + 744 + 196884 q + ... computed through q^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    pad = N + 2
    num = eisenstein_e4(pad) ** 3
    den = delta_series(pad)
    return (num / den).truncate(N)


@lru_cache(maxsize=None)
def faber(m, N):
    """Weight-0 basis element q^{-m} + O(q) via monomials in J = j - 744."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return QSeries(0, [1] + [0] * N)
    J = j_invariant(N + m - 1) - 744
    if m == 1:
        return J.truncate(N)
    S = J ** m
    for k in range(m - 1, 0, -1):
        S = S - S.coeff(-k) * faber(k, S.N)
    S = S - S.coeff(0)
    return S.truncate(N)


def theta_series(N):
    """1 + 2q + 2q^4 + 2q^9 + ..., tagged with weight-1/2 support."""
    coeffs = [0] * (N + 1)
    coeffs[0] = 1
    n = 1
    while n * n <= N:
        coeffs[n * n] = 2
        n += 1
    return QSeries(0, coeffs, PLUS_SUPPORT[Fraction(1, 2)], exact_tail=False)


# --- evaluation with tail bound ----------------------------------------------------

#: Coefficient-growth envelope exponent: weakly holomorphic weight-<=0 input
#: coefficients are dominated by K e^{ALPHA sqrt(n)}.
ALPHA = 4 * mp.pi


class EvalResult(NamedTuple):
    value: object
    tail_bound: object
    n_used: int


def _to_mp(c):
    if isinstance(c, int):
        return mp.mpf(c)
    if isinstance(c, Fraction):
        return mp.mpf(c.numerator) / c.denominator
    return c


def evaluate(A, tau, scale=1, tol=None, alpha=None):
    """Sum of the computed series at tau with a geometric-envelope tail bound.

    The partial sum is exact to working precision; the returned tail bound
    dominates the dropped terms assuming the coefficient envelope
    |c_n| <= K e^{alpha sqrt(n)} with K fitted on the computed range.  The
    default alpha = 4 pi covers weight-<=0 level-1 objects (j and the faber
    basis); callers summing series with faster coefficient growth must pass
    the appropriate exponent.
    """
    alpha = ALPHA if alpha is None else mp.mpf(alpha)
    tau = mp.mpc(tau)
    y = tau.imag
    if y <= 0:
        raise ValueError("tau must lie in the upper half plane")
    sigma = mp.mpf(scale.numerator) / scale.denominator \
        if isinstance(scale, Fraction) else mp.mpf(scale)
    if sigma <= 0:
        raise ValueError("scale must be positive")

    w = mp.expjpi(2 * sigma * tau)  # e(sigma tau)
    # Horner from the top exponent down to the valuation
    acc = mp.mpc(0)
    for n in range(A.N, A.v - 1, -1):
        acc = acc * w + _to_mp(A.coeff(n))
    value = acc * w ** A.v

    if A.exact_tail:
        # finite Laurent polynomial: no dropped terms
        return EvalResult(value, mp.mpf(0), len(A.coeffs))

    # envelope constant from the computed coefficients at positive exponents
    K = mp.mpf(1)
    for n, c in A.items():
        if n >= 1 and c != 0:
            cand = abs(_to_mp(c)) * mp.exp(-alpha * mp.sqrt(n))
            if cand > K:
                K = cand
    Np1 = A.N + 1
    decay = mp.exp(-2 * mp.pi * sigma * y)
    ratio = decay * mp.exp(alpha / (2 * mp.sqrt(Np1)))
    if ratio >= 1:
        needed = int((alpha / (4 * mp.pi * sigma * y)) ** 2) + 8
        raise ConvergenceError(
            "series truncation cannot dominate the tail at this height",
            n_terms=A.N, suggested_n=max(needed, 2 * A.N),
            im_tau=float(y), scale=float(sigma))
    bound = K * mp.exp(alpha * mp.sqrt(Np1)) * decay ** Np1 / (1 - ratio)
    if tol is not None and bound > tol:
        n_try = Np1
        while n_try < 10 ** 7:
            n_try *= 2
            r2 = decay * mp.exp(alpha / (2 * mp.sqrt(n_try)))
            b2 = K * mp.exp(alpha * mp.sqrt(n_try)) * decay ** n_try / (1 - r2)
            if b2 < tol:
                break
        raise ConvergenceError(
            "tail bound %s exceeds requested tolerance" % mp.nstr(bound, 6),
            tail_bound=float(bound), tol=float(tol), n_terms=A.N,
            suggested_n=n_try)
    return EvalResult(value, bound, A.N - max(A.v, 0) + 1)
