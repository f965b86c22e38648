"""Command-line interface: computations, persistence, and the verify runner.

Exit codes: 0 success, 1 invalid input (the message names the violated
precondition), 2 convergence failure (with the c_max and spread
diagnostics), 3 one or more verify criteria failed.  Results go to
standard output in json, csv, or text form; all numbers are decimal
strings.  Diagnostics (cache hits, timings) go to standard error.
"""

import argparse
import json
import re
import sys
from fractions import Fraction

from mpmath import mp

from .acceptance import SUITES, run_suite
from .arithmetic import hurwitz_class_number
from .cache import CacheStore, params_hash
from .config import Config, ConvergenceError, default_cache_dir
from .kloosterman import (
    kloosterman_half,
    kloosterman_int,
    kloosterman_plus,
    salie,
)
from .mockforms import (
    b_coeff_mock,
    f_weakly_holo,
    g_weakly_holo,
    inner_prod_reg,
    inner_prod_theta,
    k_eval,
    kminus_eval,
    kplus_series,
    zagier_eisenstein,
)
from .poincare import bcoeff, jhat
from .qseries import evaluate
from .traces import (
    trace_cm,
    trace_cycle,
    trace_star_jhat,
    trace_star_salie,
    trace_star_series,
)

DIGITS = 30


def _fmt(v):
    """Decimal-string rendering of ints, fractions, mp reals and complexes."""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    v = mp.mpmathify(v)
    if isinstance(v, mp.mpc) and v.imag != 0:
        return mp.nstr(v, DIGITS)
    return mp.nstr(mp.mpf(v.real) if isinstance(v, mp.mpc) else v, DIGITS)


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = "%s.%s" % (prefix, k) if prefix else str(k)
        if isinstance(v, dict):
            out.update(_flatten(v, key))
        else:
            out[key] = v
    return out


def _emit(payload, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        json.dump(payload, stream, indent=2, sort_keys=True)
        stream.write("\n")
    elif fmt == "csv":
        flat = _flatten(payload)
        keys = list(flat)
        stream.write(",".join(keys) + "\n")
        stream.write(",".join(str(flat[k]) for k in keys) + "\n")
    else:
        for k, v in _flatten(payload).items():
            stream.write("%s = %s\n" % (k, v))


def _config_from(args):
    cfg = Config(
        precision_bits=args.precision_bits,
        c_max=args.cmax,
        window=args.window,
        n_terms=args.nterms,
        tol=float(args.tol),
        cache_dir=args.cache_dir or default_cache_dir(),
        fmt=args.format,
    ).validate()
    mp.prec = cfg.precision_bits
    return cfg


def _cache_params(cfg, **extra):
    params = {
        "precision_bits": cfg.precision_bits,
        "c_max": cfg.c_max,
        "window": cfg.window,
        "n_terms": cfg.n_terms,
        "tol": repr(cfg.tol),
    }
    params.update(extra)
    return params


def _cached(cfg, kind, params, compute):
    """Cache-through: returns (payload dict incl. params_hash, hit flag)."""
    store = CacheStore(cfg.cache_dir)
    digest = params_hash(kind, params)
    hit = store.get(kind, params)
    if hit is not None:
        payload = dict(hit.payload)
        payload["params_hash"] = digest
        return payload, True
    payload = compute()
    store.put(kind, params, payload)
    payload = dict(payload)
    payload["params_hash"] = digest
    return payload, False


_TAU_RE = re.compile(
    r"^\s*([+-]?[0-9.eE+-]+?)\s*([+-])\s*([0-9.eE]+[0-9.eE+-]*?)[ij]\s*$")


def _parse_tau(text):
    """Parse 'a+bj' keeping full decimal precision (no float round trip)."""
    text = text.strip()
    m = _TAU_RE.match(text)
    if m:
        re_part, sign, im_part = m.groups()
        return mp.mpc(mp.mpf(re_part),
                      mp.mpf(im_part) * (1 if sign == "+" else -1))
    if text.endswith(("j", "i")):
        return mp.mpc(0, mp.mpf(text[:-1] or "1"))
    return mp.mpc(mp.mpf(text), 0)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def cmd_trace(cfg, args):
    kind = args.kind
    params = _cache_params(cfg, d=args.d, D=args.D, kind=kind,
                           s=args.s or "")

    def compute():
        if kind == "cm":
            r = trace_cm(args.d, args.D)
            # CM traces are rational integers; snap when the reported
            # error bound certifies the nearest integer.
            nearest = mp.nint(r.value)
            if (r.error_estimate < mp.mpf("1e-9")
                    and abs(r.value - nearest) < mp.mpf("1e-6")):
                return {"d": str(args.d), "D": str(args.D), "kind": kind,
                        "value": str(int(nearest)), "method": r.method,
                        "error_estimate": _fmt(r.error_estimate)}
        elif kind == "cycle":
            r = trace_cycle(args.d, args.D)
        elif kind == "star":
            r = trace_star_jhat(args.d, args.D, c_max=cfg.c_max,
                                window=cfg.window)
        elif kind == "star-series":
            r = trace_star_series(args.d, args.D, mp.mpf(args.s),
                                  c_max=cfg.c_max, window=cfg.window)
        else:
            r = trace_star_salie(args.d, args.D, mp.mpf(args.s),
                                 c_max=cfg.c_max, window=cfg.window)
        return {"d": str(args.d), "D": str(args.D), "kind": kind,
                "value": _fmt(r.value), "method": r.method,
                "error_estimate": _fmt(r.error_estimate)}

    if kind in ("star-series", "star-salie") and args.s is None:
        raise ValueError("trace --kind %s requires -s (spectral parameter)"
                         % kind)
    payload, hit = _cached(cfg, "trace." + kind, params, compute)
    if hit:
        print("cache hit", file=sys.stderr)
    _emit(payload, cfg.fmt)
    return 0


def cmd_hurwitz(cfg, args):
    payload = {"n": str(args.n), "value": _fmt(hurwitz_class_number(args.n))}
    _emit(payload, cfg.fmt)
    return 0


def cmd_kloosterman(cfg, args):
    w = args.weight
    if w == "int":
        v = kloosterman_int(args.m, args.n, args.c)
    elif w == "plus":
        v = kloosterman_plus(args.m, args.n, args.c)
    else:
        v = kloosterman_half(Fraction(w), args.m, args.n, args.c)
    payload = {"m": str(args.m), "n": str(args.n), "c": str(args.c),
               "weight": w, "value": _fmt(v)}
    _emit(payload, cfg.fmt)
    return 0


def cmd_salie(cfg, args):
    v = salie(args.m, args.d, args.D, args.c)
    payload = {"m": str(args.m), "d": str(args.d), "D": str(args.D),
               "c": str(args.c), "value": _fmt(v)}
    _emit(payload, cfg.fmt)
    return 0


def cmd_bcoeff(cfg, args):
    params = _cache_params(cfg, m=args.m, n=args.n, s=args.s)

    def compute():
        r = bcoeff(args.m, args.n, mp.mpf(args.s), c_max=cfg.c_max,
                   window=cfg.window, tol=cfg.tol)
        return {"m": str(args.m), "n": str(args.n), "s": args.s,
                "value": _fmt(r.value),
                "error_estimate": _fmt(r.abs_error_estimate),
                "c_max_used": str(r.c_max_used), "window": str(r.window)}

    payload, hit = _cached(cfg, "bcoeff", params, compute)
    if hit:
        print("cache hit", file=sys.stderr)
    _emit(payload, cfg.fmt)
    return 0


def cmd_mock_coeff(cfg, args):
    params = _cache_params(cfg, D=args.D, d=args.d)

    def compute():
        r = b_coeff_mock(args.D, args.d, c_max=cfg.c_max, window=cfg.window)
        return {"D": str(args.D), "d": str(args.d), "value": _fmt(r.value),
                "components": {"class_number_term": _fmt(r.class_number_term),
                               "trace_term": _fmt(r.trace_term)},
                "method": r.params.get("trace_method", "jhat"),
                "error_estimate": _fmt(r.error_estimate)}

    payload, hit = _cached(cfg, "mock-coeff", params, compute)
    if hit:
        print("cache hit", file=sys.stderr)
    _emit(payload, cfg.fmt)
    return 0


def cmd_inner_prod(cfg, args):
    if args.theta:
        params = _cache_params(cfg, d=args.d, pairing="theta")

        def compute():
            return {"d": str(args.d), "pairing": "theta",
                    "value": _fmt(inner_prod_theta(args.d))}
    else:
        if args.D is None:
            raise ValueError("inner-prod requires -D unless --theta is set")
        params = _cache_params(cfg, d=args.d, D=args.D, pairing="reg")

        def compute():
            v = inner_prod_reg(args.D, args.d, c_max=cfg.c_max,
                               window=cfg.window)
            return {"D": str(args.D), "d": str(args.d), "pairing": "reg",
                    "value": _fmt(v)}

    payload, hit = _cached(cfg, "inner-prod", params, compute)
    if hit:
        print("cache hit", file=sys.stderr)
    _emit(payload, cfg.fmt)
    return 0


def cmd_series(cfg, args):
    N = args.N or cfg.n_terms
    if args.kind == "g":
        series = g_weakly_holo(args.D, N)
        provenance = None
    elif args.kind == "f":
        tagged = f_weakly_holo(args.d, N)
        series, provenance = tagged.series, tagged.provenance
    elif args.kind == "kplus":
        series = kplus_series(args.d, N, c_max=cfg.c_max, window=cfg.window)
        provenance = None
    else:
        series = zagier_eisenstein(N)
        provenance = None
    coeffs = {}
    for n in range(series.v, series.N + 1):
        c = series.coeff(n)
        if c != 0:
            coeffs[str(n)] = _fmt(c)
    support = ("" if series.support is None
               else ",".join(str(r) for r in sorted(series.support)))
    payload = {"kind": args.kind, "v": str(series.v), "N": str(series.N),
               "support_residues_mod4": support, "coefficients": coeffs}
    if provenance is not None:
        payload["provenance"] = {str(k): v for k, v in provenance.items()}
    _emit(payload, cfg.fmt)
    return 0


def cmd_eval(cfg, args):
    tau = _parse_tau(args.tau)
    params = _cache_params(cfg, kind=args.kind, d=args.d or 0,
                           m=args.m or 0, tau=mp.nstr(tau, DIGITS),
                           head=args.head, diagonal=args.diagonal)

    def compute():
        if args.kind == "jhat":
            v = jhat(args.m, tau)
        elif args.kind == "k":
            v = k_eval(args.d, tau, N=min(cfg.n_terms, 24), c_max=cfg.c_max,
                       window=cfg.window, head=args.head,
                       diagonal=args.diagonal)
        elif args.kind == "kminus":
            v = kminus_eval(args.d, tau, N=min(cfg.n_terms, 24),
                            c_max=cfg.c_max, window=cfg.window,
                            head=args.head)
        elif args.kind == "f":
            v = evaluate(f_weakly_holo(args.d, cfg.n_terms).series, tau,
                         alpha=6.0).value
        else:
            v = evaluate(g_weakly_holo(args.D, cfg.n_terms), tau,
                         alpha=6.0).value
        return {"kind": args.kind, "tau": mp.nstr(tau, DIGITS),
                "value": _fmt(v)}

    payload, hit = _cached(cfg, "eval", params, compute)
    if hit:
        print("cache hit", file=sys.stderr)
    _emit(payload, cfg.fmt)
    return 0


def cmd_verify(cfg, args):
    results = run_suite(args.suite, cfg)
    if cfg.fmt == "json":
        payload = {"suite": args.suite,
                   "results": [{"number": r.number, "name": r.name,
                                "ok": r.ok, "runtime": "%.2f" % r.runtime,
                                "detail": r.detail,
                                "measurements": r.measurements}
                               for r in results]}
        _emit(payload, "json")
    else:
        for r in results:
            print(r.line)
        n_ok = sum(r.ok for r in results)
        print("%d/%d criteria passed" % (n_ok, len(results)))
    return 0 if all(r.ok for r in results) else 3


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _common_flags(with_defaults):
    # The subparser copy uses SUPPRESS so flags given before the
    # subcommand are not clobbered by subparser defaults.
    d = (lambda v: v) if with_defaults else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=d(256))
    common.add_argument("--cmax", type=int, default=d(40000))
    common.add_argument("--window", type=int, default=d(64))
    common.add_argument("--nterms", type=int, default=d(64))
    common.add_argument("--tol", default=d("1e-3"))
    common.add_argument("--cache-dir", default=d(None))
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default=d("json"))
    return common


def build_parser():
    p = argparse.ArgumentParser(
        prog="cyclotrace", parents=[_common_flags(True)],
        description="Traces of singular moduli, half-integral-weight "
                    "Kloosterman sums, and mock modular coefficients.")
    sub = p.add_subparsers(dest="command", required=True)
    sub_common = _common_flags(False)

    def add(name, **kw):
        return sub.add_parser(name, parents=[sub_common], **kw)

    t = add("trace", help="CM, cycle, and modified traces")
    t.add_argument("--kind", choices=("cm", "cycle", "star", "star-series",
                                      "star-salie"), default="cm")
    t.add_argument("-d", type=int, required=True)
    t.add_argument("-D", type=int, default=1)
    t.add_argument("-s", default=None)
    t.set_defaults(fn=cmd_trace)

    h = add("hurwitz", help="Hurwitz class number H(n)")
    h.add_argument("-n", type=int, required=True)
    h.set_defaults(fn=cmd_hurwitz)

    k = add("kloosterman", help="Kloosterman sums")
    k.add_argument("--weight", choices=("int", "1/2", "3/2", "plus"),
                   default="plus")
    k.add_argument("-m", type=int, required=True)
    k.add_argument("-n", type=int, required=True)
    k.add_argument("-c", type=int, required=True)
    k.set_defaults(fn=cmd_kloosterman)

    sl = add("salie", help="Salie sums with genus character")
    sl.add_argument("-m", type=int, required=True)
    sl.add_argument("-d", type=int, required=True)
    sl.add_argument("-D", type=int, required=True)
    sl.add_argument("-c", type=int, required=True)
    sl.set_defaults(fn=cmd_salie)

    b = add("bcoeff", help="Fourier coefficient b_m(n, s)")
    b.add_argument("-m", type=int, required=True)
    b.add_argument("-n", type=int, required=True)
    b.add_argument("-s", required=True)
    b.set_defaults(fn=cmd_bcoeff)

    mc = add("mock-coeff", help="mock coefficient b(D, d)")
    mc.add_argument("-D", type=int, required=True)
    mc.add_argument("-d", type=int, required=True)
    mc.set_defaults(fn=cmd_mock_coeff)

    ip = add("inner-prod", help="regularized inner products")
    ip.add_argument("--theta", action="store_true")
    ip.add_argument("-d", type=int, required=True)
    ip.add_argument("-D", type=int, default=None)
    ip.set_defaults(fn=cmd_inner_prod)

    se = add("series", help="q-expansions (g, f, kplus, E)")
    se.add_argument("--kind", choices=("g", "f", "kplus", "eisenstein"),
                    required=True)
    se.add_argument("-d", type=int, default=-3)
    se.add_argument("-D", type=int, default=1)
    se.add_argument("-N", type=int, default=None)
    se.set_defaults(fn=cmd_series)

    ev = add("eval", help="evaluate a form at a point")
    ev.add_argument("--kind", choices=("jhat", "k", "kminus", "f", "g"),
                    required=True)
    ev.add_argument("--tau", required=True)
    ev.add_argument("-d", type=int, default=-3)
    ev.add_argument("-D", type=int, default=1)
    ev.add_argument("-m", type=int, default=1)
    ev.add_argument("--head", choices=("radial", "continued"),
                    default="radial")
    ev.add_argument("--diagonal", choices=("literal", "column"),
                    default="literal")
    ev.set_defaults(fn=cmd_eval)

    vf = add("verify", help="run acceptance criteria")
    vf.add_argument("--suite", choices=sorted(SUITES), default="all")
    vf.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on argument errors; that code is reserved for
        # convergence failures, so remap bad arguments to invalid input.
        return 1 if exc.code else 0
    try:
        cfg = _config_from(args)
        return args.fn(cfg, args)
    except ConvergenceError as exc:
        diag = ", ".join("%s=%s" % kv for kv in sorted(
            exc.diagnostics.items()))
        print("convergence failure: %s (%s)" % (exc, diag), file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
