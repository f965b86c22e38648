"""Traces of singular moduli, half-integral-weight exponential sums, and
Maass-Poincare series numerics on the modular curve.

Importing the package raises the global mpmath working precision to the
configured default (256 bits) if it is currently lower.  Submodules hold
the heavy machinery; the names re-exported here are the stable API.
"""

from . import config as _config  # noqa: F401  (sets default precision)
from .arithmetic import (
    class_list_definite,
    hurwitz_class_number,
    is_discriminant,
    is_fundamental,
    kronecker,
)
from .cache import CacheEntry, CacheStore, params_hash
from .config import Config, ConvergenceError, default_cache_dir
from .kloosterman import (
    kloosterman_half,
    kloosterman_int,
    kloosterman_plus,
    salie,
    salie_root_count,
)
from .mockforms import (
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
)
from .poincare import bcoeff, bcoeff_ds, eisenstein_g0, jhat, niebur_expansion
from .qseries import QSeries, evaluate, faber, j_invariant
from .traces import (
    trace_cm,
    trace_cycle,
    trace_star_jhat,
    trace_star_salie,
    trace_star_series,
)

__version__ = "1.0.0"

__all__ = [
    "CacheEntry", "CacheStore", "Config", "ConvergenceError", "QSeries",
    "b_coeff_mock", "bcoeff", "bcoeff_ds", "class_list_definite",
    "constant_term_check", "default_cache_dir", "eisenstein_g0",
    "eo_recombine", "eo_split", "evaluate", "f_weakly_holo", "faber",
    "g_weakly_holo", "hurwitz_class_number", "inner_prod_reg",
    "inner_prod_theta", "is_discriminant", "is_fundamental", "j_invariant",
    "jhat", "k_eval", "kloosterman_half", "kloosterman_int",
    "kloosterman_plus", "kminus_eval", "kplus_series", "kronecker",
    "niebur_expansion", "params_hash", "salie", "salie_root_count",
    "trace_cm", "trace_cycle", "trace_star_jhat", "trace_star_salie",
    "trace_star_series", "zagier_eisenstein",
]
