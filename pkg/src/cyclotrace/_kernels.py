"""Low-level batch kernels for exponential sums over many moduli c.

Two interchangeable backends compute float64 values of the integral-weight
Kloosterman sum, the plus-space sum K+, and the Salie sum, for a whole vector
of moduli at once:

  * a numba @njit backend (default when numba imports cleanly), and
  * a vectorized numpy backend, selected by setting CYCLOTRACE_NO_NUMBA=1.

float64 is ample here: these kernels feed conditionally convergent c-series
whose acceptance tolerances are 1e-3..1e-8, while the exact small-c identity
checks use the integer-histogram evaluators in the kloosterman module.
"""

import math
import os

import numpy as np

HAS_NUMBA = False
if os.environ.get("CYCLOTRACE_NO_NUMBA", "") not in ("1", "true", "yes"):
    try:
        from numba import njit
        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is an install extra
        pass

if not HAS_NUMBA:
    def njit(*args, **kwargs):  # pragma: no cover - trivial shim
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


# --- numba backend -------------------------------------------------------------

@njit(cache=True)
def _kloosterman_int_batch_jit(m, n, cs, out_re, out_im):
    for idx in range(cs.shape[0]):
        c = cs[idx]
        acc_re = 0.0
        acc_im = 0.0
        for v in range(1, c + 1):
            a = v
            b = c
            while b:
                a, b = b, a % b
            if a != 1:
                continue
            # inverse of v mod c by the extended Euclid algorithm
            t0, t1 = 0, 1
            r0, r1 = c, v
            while r1:
                q = r0 // r1
                r0, r1 = r1, r0 - q * r1
                t0, t1 = t1, t0 - q * t1
            inv = t0 % c
            ph = (m * inv + n * v) % c
            ang = 2.0 * np.pi * ph / c
            acc_re += np.cos(ang)
            acc_im += np.sin(ang)
        out_re[idx] = acc_re
        out_im[idx] = acc_im


@njit(cache=True)
def _kloosterman_half_batch_jit(two_k, m, n, cs, out_re, out_im):
    # two_k = 1 for weight 1/2, 3 for weight 3/2
    for idx in range(cs.shape[0]):
        c = cs[idx]
        acc_re = 0.0
        acc_im = 0.0
        for v in range(1, c, 2):
            a = v
            b = c
            while b:
                a, b = b, a % b
            if a != 1:
                continue
            t0, t1 = 0, 1
            r0, r1 = c, v
            while r1:
                q = r0 // r1
                r0, r1 = r1, r0 - q * r1
                t0, t1 = t1, t0 - q * t1
            inv = t0 % c
            # Jacobi symbol (c / v) for odd v > 0
            jac = 1
            aa = c % v
            nn = v
            while aa != 0:
                while aa % 2 == 0:
                    aa //= 2
                    if nn % 8 == 3 or nn % 8 == 5:
                        jac = -jac
                tmp = aa
                aa = nn
                nn = tmp
                if aa % 4 == 3 and nn % 4 == 3:
                    jac = -jac
                aa %= nn
            # unit factor i^t from (c/v)^{2k} eps_v^{2k}
            t = 0
            if v % 4 == 3:
                t = two_k % 4
            if jac == -1:
                t = (t + 2) % 4
            ph = (m * inv + n * v) % c
            ang = 2.0 * np.pi * ph / c
            cr = np.cos(ang)
            ci = np.sin(ang)
            if t == 0:
                acc_re += cr
                acc_im += ci
            elif t == 1:
                acc_re -= ci
                acc_im += cr
            elif t == 2:
                acc_re -= cr
                acc_im -= ci
            else:
                acc_re += ci
                acc_im -= cr
        out_re[idx] = acc_re
        out_im[idx] = acc_im


@njit(cache=True)
def _salie_batch_jit(m, d, D, cs, char_table, out_re, out_im):
    Dd = D * d
    absD = abs(D)
    bound = 2 * absD + 8
    for idx in range(cs.shape[0]):
        c = cs[idx]
        a0 = c // 4
        acc_re = 0.0
        acc_im = 0.0
        for b in range(c):
            if (b * b - Dd) % c != 0:
                continue
            cc = (b * b - Dd) // c
            # genus character of [a0, b, cc]: Kronecker (D / r) at the first
            # represented value r coprime to D
            chi = 0
            found = False
            for total in range(1, 2 * bound + 1):
                if found:
                    break
                for x in range(0, total + 1):
                    if found:
                        break
                    y = total - x
                    if x > bound or y > bound:
                        continue
                    for s1 in range(2):
                        if found:
                            break
                        if x == 0 and s1 == 1:
                            continue
                        X = x if s1 == 0 else -x
                        for s2 in range(2):
                            if y == 0 and s2 == 1:
                                continue
                            Y = y if s2 == 0 else -y
                            r = a0 * X * X + b * X * Y + cc * Y * Y
                            if r == 0:
                                continue
                            g = r if r > 0 else -r
                            h = absD
                            while h:
                                g, h = h, g % h
                            if g == 1:
                                chi = char_table[r % absD]
                                found = True
                                break
            if chi == 0:
                continue
            ang = 2.0 * np.pi * ((2 * m * b) % c) / c
            acc_re += chi * np.cos(ang)
            acc_im += chi * np.sin(ang)
        out_re[idx] = acc_re
        out_im[idx] = acc_im


# --- numpy backend ---------------------------------------------------------------

def _euler_phi(c):
    result = c
    n = c
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _modpow_vec(base, exp, mod):
    """base^exp mod `mod` elementwise; requires mod < 2^31."""
    base = base.astype(np.uint64) % np.uint64(mod)
    out = np.ones_like(base)
    m = np.uint64(mod)
    while exp:
        if exp & 1:
            out = (out * base) % m
        base = (base * base) % m
        exp >>= 1
    return out


def _jacobi_vec(a, n):
    """Jacobi symbols (a_i / n_i) for odd n_i > 0, vectorized."""
    a = a.astype(np.int64).copy()
    n = n.astype(np.int64).copy()
    sign = np.ones(len(a), dtype=np.int64)
    a %= n
    while True:
        active = a != 0
        if not active.any():
            break
        # strip one factor of 2 where even
        even = active & (a % 2 == 0)
        while even.any():
            a[even] //= 2
            flip = even & np.isin(n % 8, (3, 5))
            sign[flip] = -sign[flip]
            even = active & (a % 2 == 0)
        # reciprocity swap where both odd
        odd = active & (a % 2 == 1)
        if odd.any():
            flip = odd & (a % 4 == 3) & (n % 4 == 3)
            sign[flip] = -sign[flip]
            a_old = a[odd]
            a[odd] = n[odd] % a_old
            n[odd] = a_old
    return np.where(n == 1, sign, 0)


def _coprime_units(c):
    v = np.arange(1, c + 1, dtype=np.int64)
    return v[np.gcd(v, c) == 1]


def _kloosterman_int_batch_np(m, n, cs):
    out = np.zeros(len(cs), dtype=np.complex128)
    for idx, c in enumerate(cs):
        c = int(c)
        if c == 1:
            out[idx] = 1.0
            continue
        v = _coprime_units(c)
        inv = _modpow_vec(v, _euler_phi(c) - 1, c).astype(np.int64)
        ph = (m * inv + n * v) % c
        ang = 2.0 * np.pi * ph / c
        out[idx] = np.cos(ang).sum() + 1j * np.sin(ang).sum()
    return out


def _kloosterman_half_batch_np(two_k, m, n, cs):
    out = np.zeros(len(cs), dtype=np.complex128)
    unit = 1j ** np.arange(4)
    for idx, c in enumerate(cs):
        c = int(c)
        v = np.arange(1, c, 2, dtype=np.int64)
        v = v[np.gcd(v, c) == 1]
        inv = _modpow_vec(v, _euler_phi(c) - 1, c).astype(np.int64)
        jac = _jacobi_vec(np.full(len(v), c, dtype=np.int64), v)
        t = np.where(v % 4 == 3, two_k % 4, 0)
        t = (t + np.where(jac == -1, 2, 0)) % 4
        ph = (m * inv + n * v) % c
        ang = 2.0 * np.pi * ph / c
        terms = (np.cos(ang) + 1j * np.sin(ang)) * unit[t]
        out[idx] = terms.sum()
    return out


def _salie_batch_np(m, d, D, cs, char_table):
    out = np.zeros(len(cs), dtype=np.complex128)
    Dd = D * d
    absD = abs(D)
    bound = 2 * absD + 8
    offsets = sorted(
        ((x, y) for x in range(-bound, bound + 1)
         for y in range(-bound, bound + 1) if (x, y) != (0, 0)),
        key=lambda p: abs(p[0]) + abs(p[1]))
    for idx, c in enumerate(cs):
        c = int(c)
        a0 = c // 4
        b = np.arange(c, dtype=np.int64)
        roots = b[(b * b - Dd) % c == 0]
        acc = 0.0 + 0.0j
        for bb in roots:
            bb = int(bb)
            cc = (bb * bb - Dd) // c
            chi = 0
            for x, y in offsets:
                r = a0 * x * x + bb * x * y + cc * y * y
                if r != 0 and math.gcd(r, absD) == 1:
                    chi = int(char_table[r % absD])
                    break
            if chi == 0:
                continue
            ang = 2.0 * np.pi * ((2 * m * bb) % c) / c
            acc += chi * complex(np.cos(ang), np.sin(ang))
        out[idx] = acc
    return out


# --- public batch API ---------------------------------------------------------------

def kloosterman_int_batch(m, n, cs):
    """K0(m, n; c) for every c in cs, float64 precision."""
    cs = np.asarray(cs, dtype=np.int64)
    if HAS_NUMBA:
        out_re = np.empty(len(cs))
        out_im = np.empty(len(cs))
        _kloosterman_int_batch_jit(int(m), int(n), cs, out_re, out_im)
        return out_re + 1j * out_im
    return _kloosterman_int_batch_np(int(m), int(n), cs)


def kloosterman_half_batch(two_k, m, n, cs):
    """K_{k}(m, n; c) with 2k = two_k in {1, 3}, for every c in cs (4 | c)."""
    if two_k not in (1, 3):
        raise ValueError("two_k must be 1 or 3")
    cs = np.asarray(cs, dtype=np.int64)
    if np.any(cs % 4 != 0):
        raise ValueError("all moduli must be divisible by 4")
    if HAS_NUMBA:
        out_re = np.empty(len(cs))
        out_im = np.empty(len(cs))
        _kloosterman_half_batch_jit(int(two_k), int(m), int(n), cs,
                                    out_re, out_im)
        return out_re + 1j * out_im
    return _kloosterman_half_batch_np(int(two_k), int(m), int(n), cs)


def kloosterman_plus_batch(m, n, cs):
    """K+(m, n; c) = (1-i)(1+(4/(c/4))) K_{1/2}(m, n; c) for every c in cs."""
    cs = np.asarray(cs, dtype=np.int64)
    half = kloosterman_half_batch(1, m, n, cs)
    four_factor = np.where((cs // 4) % 2 == 1, 2.0, 1.0)
    return (1 - 1j) * four_factor * half


def salie_batch(m, d, D, cs):
    """S_m(d, D; c) for every c in cs (4 | c), float64 precision."""
    from .arithmetic import is_fundamental, kronecker
    if not is_fundamental(D):
        raise ValueError("D must be fundamental")
    if (d * D) % 4 not in (0, 1):
        raise ValueError("dD must be a discriminant value (0,1 mod 4)")
    cs = np.asarray(cs, dtype=np.int64)
    if np.any(cs % 4 != 0):
        raise ValueError("all moduli must be divisible by 4")
    absD = abs(D)
    char_table = np.array([kronecker(D, r) for r in range(absD)],
                          dtype=np.int64)
    if HAS_NUMBA:
        out_re = np.empty(len(cs))
        out_im = np.empty(len(cs))
        _salie_batch_jit(int(m), int(d), int(D), cs, char_table,
                         out_re, out_im)
        return out_re + 1j * out_im
    return _salie_batch_np(int(m), int(d), int(D), cs, char_table)
