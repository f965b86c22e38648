"""Runtime configuration, precision context, and shared error types."""

import os
from dataclasses import dataclass, field

from mpmath import mp

DEFAULT_PRECISION_BITS = 256

# Package-wide default working precision. Individual computations that
# need headroom (CM evaluation, reference series) raise it locally with
# working_precision().
if mp.prec < DEFAULT_PRECISION_BITS:
    mp.prec = DEFAULT_PRECISION_BITS


def working_precision(bits):
    """Context manager running the enclosed arithmetic at `bits` mantissa bits."""
    return mp.workprec(int(bits))


class ConvergenceError(RuntimeError):
    """A series/quadrature failed its requested tolerance.

    Carries diagnostics so the CLI can report them on exit code 2.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


def default_cache_dir():
    env = os.environ.get("CYCLOTRACE_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "cyclotrace")


@dataclass
class Config:
    """CLI/computation defaults.

    tol must stay resolvable at the configured precision
    (tol >= 2^(-precision_bits/2)).
    """

    precision_bits: int = DEFAULT_PRECISION_BITS
    c_max: int = 40000
    window: int = 64
    n_terms: int = 64
    tol: float = 1e-3
    cache_dir: str = field(default_factory=default_cache_dir)
    fmt: str = "json"

    def validate(self):
        for name in ("precision_bits", "c_max", "window", "n_terms"):
            if getattr(self, name) <= 0:
                raise ValueError("%s must be positive" % name)
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.tol < 2.0 ** (-self.precision_bits / 2.0):
            raise ValueError(
                "tol=%g is below 2^(-precision_bits/2); raise precision_bits"
                % self.tol
            )
        if self.fmt not in ("json", "csv", "text"):
            raise ValueError("format must be one of json, csv, text")
        return self
