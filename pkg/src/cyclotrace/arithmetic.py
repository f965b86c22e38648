"""Exact integer/rational arithmetic: discriminants, binary quadratic forms,
class lists, genus characters, CM points, and Pell automorphs.

Everything here is exact (python ints / Fractions); conversion to extended
precision happens only in cm_point.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp


# --- elementary number theory -------------------------------------------------

def kronecker(D, n):
    """Kronecker symbol (D/n) with the standard conventions."""
    D, n = int(D), int(n)
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    if n % 2 == 0:
        if D % 2 == 0:
            return 0
        two_sym = 1 if D % 8 in (1, 7) else -1
        while n % 2 == 0:
            n //= 2
            result *= two_sym
    # n odd positive: Jacobi symbol via reciprocity
    a = D % n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def divisors(m):
    """Positive divisors of |m|, ascending."""
    m = abs(int(m))
    if m == 0:
        raise ValueError("divisors of 0")
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def sigma(k, m):
    """Divisor power sum sigma_k(m) = sum_{t | m} t^k, exact."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return sum(t ** k for t in divisors(m))


def sigma_real(alpha, m):
    """sigma_alpha(m) for real exponent alpha, at working precision."""
    if m < 1:
        raise ValueError("m must be >= 1")
    alpha = mp.mpf(alpha)
    return mp.fsum(mp.power(t, alpha) for t in divisors(m))


def _squarefree(m):
    m = abs(m)
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


def is_discriminant(n):
    n = int(n)
    return n != 0 and n % 4 in (0, 1)


def is_fundamental(D):
    """Fundamental discriminant; 1 counts (trivial-character convention)."""
    D = int(D)
    if D == 1:
        return True
    if not is_discriminant(D):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    m = D // 4
    return m % 4 in (2, 3) and _squarefree(m)


# --- quadratic forms ------------------------------------------------------------

@dataclass(frozen=True)
class QuadForm:
    """Integral binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self):
        return math.gcd(math.gcd(abs(self.a), abs(self.b)), abs(self.c))

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def apply(self, M):
        """Right action by M = ((p, q), (r, s)): Q(px+qy, rx+sy)."""
        (p, q), (r, s) = M
        if p * s - q * r != 1:
            raise ValueError("transformation must have determinant 1")
        a2 = self(p, r)
        c2 = self(q, s)
        b2 = 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s
        return QuadForm(a2, b2, c2)

    def neg(self):
        return QuadForm(-self.a, -self.b, -self.c)


def _validate_definite(Q):
    if Q.disc >= 0:
        raise ValueError("form must have negative discriminant")
    if Q.a <= 0:
        raise ValueError("positive definite form requires a > 0")


def reduce_definite(Q):
    """Unique reduced representative (|b| <= a <= c, b >= 0 on ties)."""
    _validate_definite(Q)
    a, b, c = Q.a, Q.b, Q.c
    while True:
        if abs(b) > a:
            # translate so that b lands in (-a, a]
            k = (b + a - 1) // (2 * a)
            b = b - 2 * k * a
            c = (b * b - Q.disc) // (4 * a)
            continue
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0 and (a == -b or a == c):
        b = -b
    return QuadForm(a, b, c)


def _stabilizer_order(Q):
    """PSL2 stabilizer order of a reduced definite form: 3, 2 or 1."""
    if Q.a == Q.b == Q.c:
        return 3
    if Q.a == Q.c and Q.b == 0:
        return 2
    return 1


@dataclass
class ClassList:
    discriminant: int
    forms: list
    stabilizers: list


def class_list_definite(d):
    """All reduced forms of discriminant d < 0 (imprimitive included)."""
    d = int(d)
    if d >= 0 or not is_discriminant(d):
        raise ValueError("d must be a negative discriminant")
    forms = []
    b = d % 2
    while 3 * b * b <= -d:
        m4 = b * b - d
        # b = d (mod 2) makes b^2 - d = 0 (mod 4)
        m = m4 // 4
        for a in divisors(m):
            if a * a > m:
                break
            if a < b:
                continue
            c = m // a
            forms.append(QuadForm(a, b, c))
            if 0 < b < a < c:
                forms.append(QuadForm(a, -b, c))
        b += 2
    forms.sort(key=lambda Q: (Q.a, -Q.b, Q.c))
    return ClassList(d, forms, [_stabilizer_order(Q) for Q in forms])


def hurwitz_class_number(n):
    """Hurwitz-Kronecker H(n); H(0) = -1/12, domain n = 0 or n = 0,3 (mod 4).

    Independent b-major counting loop (class_list_definite enumerates
    divisor-major); the two are cross-checked in the acceptance suite.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        raise ValueError("H(n) undefined for n = 1,2 (mod 4)")
    total = Fraction(0)
    b = n % 2
    while b * b <= n:
        m4 = b * b + n
        m = m4 // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                Q = QuadForm(a, b, c)
                w = _stabilizer_order(Q)
                total += Fraction(1, w)
                if 0 < b < a < c:
                    total += Fraction(1, w)
            a += 1
        b += 2
    return total


def genus_character(D, Q):
    """Genus character chi_D(Q) = (D/r) for a represented r coprime to D."""
    D = int(D)
    if not is_fundamental(D):
        raise ValueError("twisting discriminant D=%d is not fundamental" % D)
    disc = Q.disc
    if disc % D != 0 or not is_discriminant(disc // D):
        raise ValueError("disc(Q)=%d is not D times a discriminant" % disc)
    g = math.gcd(Q.content, abs(D))
    if g > 1:
        return 0
    bound = 2 * abs(D) + 8
    for total in range(1, 2 * bound + 1):
        for x in range(0, total + 1):
            y = total - x
            if x > bound or y > bound:
                continue
            for sx in ((1,) if x == 0 else (1, -1)):
                for sy in ((1,) if y == 0 else (1, -1)):
                    r = Q(sx * x, sy * y)
                    if r != 0 and math.gcd(r, D) == 1:
                        return kronecker(D, r)
    raise RuntimeError(
        "no represented value coprime to D within search bound (cannot happen "
        "for primitive-mod-D forms)")


def cm_point(Q):
    """Root of Q(tau, 1) = 0 in the upper half plane (definite Q)."""
    _validate_definite(Q)
    return mp.mpc(-Q.b, mp.sqrt(-Q.disc)) / (2 * Q.a)


# --- Pell equation and automorphs ------------------------------------------------

def _isqrt(n):
    return math.isqrt(n)


def _pell_plus_one(N):
    """Minimal (x, y), x,y > 0 with x^2 - N y^2 = 1, via continued fractions."""
    a0 = _isqrt(N)
    if a0 * a0 == N:
        raise ValueError("N must be non-square")
    m, dd, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while h * h - N * k * k != 1:
        m = dd * a - m
        dd = (N - m * m) // dd
        a = (a0 + m) // dd
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
    return h, k


def pell_fundamental(Delta):
    """Minimal t, u > 0 with t^2 - Delta u^2 = 4 (Delta > 0 non-square disc)."""
    Delta = int(Delta)
    if Delta <= 0 or not is_discriminant(Delta):
        raise ValueError("Delta must be a positive discriminant")
    r = _isqrt(Delta)
    if r * r == Delta:
        raise ValueError("Delta must be non-square")
    if Delta % 4 == 0:
        x, y = _pell_plus_one(Delta // 4)
        return 2 * x, y
    x1, y1 = _pell_plus_one(Delta)
    # The minimal 4-solution is either (2 x1, 2 y1) or the half-integer cube
    # root of x1 + y1 sqrt(Delta) in the order of discriminant Delta.
    prec = int(1.5 * (x1.bit_length() + 1)) + 80
    with mp.workprec(prec):
        sq = mp.sqrt(Delta)
        eps = x1 + y1 * sq
        eta = mp.cbrt(eps)
        t = int(mp.nint(eta + 1 / eta))
        u = int(mp.nint((eta - 1 / eta) / sq))
    if t > 0 and u > 0 and t * t - Delta * u * u == 4:
        return t, u
    return 2 * x1, 2 * y1


def automorph(Q):
    """Generator of the (infinite cyclic) automorph group of an indefinite form."""
    Delta = Q.disc
    if Delta <= 0:
        raise ValueError("automorph generator needs positive discriminant")
    t, u = pell_fundamental(Delta)
    if (t + Q.b * u) % 2 != 0:
        raise RuntimeError("parity failure in automorph (cannot happen)")
    M = (((t + Q.b * u) // 2, Q.c * u), (-Q.a * u, (t - Q.b * u) // 2))
    if M[0][0] * M[1][1] - M[0][1] * M[1][0] != 1:
        raise RuntimeError("automorph determinant != 1 (cannot happen)")
    return M


def gamma_infty_reps(Delta, a_max):
    """Forms [a, b, (b^2-Delta)/4a], 0 < a <= a_max, 0 <= b < 4a, b^2 = Delta (mod 4a)."""
    Delta = int(Delta)
    if Delta <= 0 or not is_discriminant(Delta):
        raise ValueError("Delta must be a positive discriminant")
    reps = []
    for a in range(1, a_max + 1):
        for b in range(0, 4 * a):
            if (b * b - Delta) % (4 * a) == 0:
                reps.append(QuadForm(a, b, (b * b - Delta) // (4 * a)))
    return reps


# --- indefinite class lists (cycle representatives) -------------------------------

def _is_reduced_indefinite(Q, sqrt_disc):
    return 0 < Q.b < sqrt_disc and abs(sqrt_disc - 2 * abs(Q.a)) < Q.b


def _rho_step(Q):
    """One reduction step on an indefinite form (cycles on reduced forms)."""
    Delta = Q.disc
    s = _isqrt(Delta)
    c = Q.c
    # unique b' = -b (mod 2c) with sqrt(Delta) - 2|c| < b' <= sqrt(Delta)
    two_c = 2 * abs(c)
    b2 = -Q.b % two_c
    # shift b2 into (s - 2|c|, s]; exact integer comparison against sqrt
    while b2 > s or (b2 == s and s * s == Delta):
        b2 -= two_c
    while b2 + two_c <= s:
        b2 += two_c
    c2 = (b2 * b2 - Delta) // (4 * c)
    return QuadForm(c, b2, c2)


def class_list_indefinite(Delta):
    """One reduced representative per class of discriminant Delta > 0 non-square."""
    Delta = int(Delta)
    if Delta <= 0 or not is_discriminant(Delta):
        raise ValueError("Delta must be a positive discriminant")
    s = _isqrt(Delta)
    if s * s == Delta:
        raise ValueError("Delta must be non-square")
    reduced = set()
    for b in range(1, s + 1):
        if (b - Delta) % 2 != 0:
            continue
        m4 = Delta - b * b
        if m4 <= 0 or m4 % 4 != 0:
            continue
        m = m4 // 4  # = -ac > 0
        for a_abs in divisors(m):
            if not abs(s - 2 * a_abs) < b:
                continue
            c_abs = m // a_abs
            reduced.add(QuadForm(a_abs, b, -c_abs))
            reduced.add(QuadForm(-a_abs, b, c_abs))
    reps = []
    seen = set()
    for Q in sorted(reduced, key=lambda f: (f.a, f.b, f.c)):
        if Q in seen:
            continue
        cycle = [Q]
        cur = _rho_step(Q)
        guard = 0
        while cur != Q:
            cycle.append(cur)
            cur = _rho_step(cur)
            guard += 1
            if guard > 10000:
                raise RuntimeError("reduction cycle did not close")
        seen.update(cycle)
        reps.append(Q)
    return ClassList(Delta, reps, [1] * len(reps))
