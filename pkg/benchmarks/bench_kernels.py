"""Timing comparison of the jit and pure-numpy Kloosterman/Salie kernels.

The backend is chosen at import time by CYCLOTRACE_NO_NUMBA, so each
backend runs in a fresh subprocess and this driver collects the table:

    python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

CASES = [
    ("kloosterman_int_batch", "kloosterman_int_batch(1, 2, cs)", 20000),
    ("kloosterman_half_batch", "kloosterman_half_batch(3, 3, 4, cs)", 20000),
    ("salie_batch", "salie_batch(-1, -4, -3, cs)", 20000),
]

WORKER = r"""
import json, os, sys, time
import numpy as np
from cyclotrace._kernels import (kloosterman_int_batch,
                                 kloosterman_half_batch, salie_batch,
                                 HAS_NUMBA)
name, expr, cmax = sys.argv[1], sys.argv[2], int(sys.argv[3])
cs = np.arange(4, cmax + 1, 4, dtype=np.int64)
eval(expr)                      # warm-up: jit compilation / cache load
best = min(
    (lambda t0: (eval(expr), time.perf_counter() - t0)[1])(time.perf_counter())
    for _ in range(3))
print(json.dumps({"name": name, "numba": bool(HAS_NUMBA),
                  "c_max": cmax, "seconds": best}))
"""


def run_backend(no_numba):
    env = dict(os.environ)
    env["CYCLOTRACE_NO_NUMBA"] = "1" if no_numba else ""
    rows = {}
    for name, expr, cmax in CASES:
        out = subprocess.run(
            [sys.executable, "-c", WORKER, name, expr, str(cmax)],
            capture_output=True, text=True, env=env, check=True)
        row = json.loads(out.stdout.strip().splitlines()[-1])
        assert row["numba"] is (not no_numba), (
            "backend flag not honored: %r" % row)
        rows[name] = row["seconds"]
    return rows


def main():
    jit = run_backend(no_numba=False)
    plain = run_backend(no_numba=True)
    print("%-26s %12s %12s %8s" % ("kernel (c <= 20000)", "numba [s]",
                                   "numpy [s]", "ratio"))
    for name, _, _ in CASES:
        print("%-26s %12.4f %12.4f %7.1fx"
              % (name, jit[name], plain[name], plain[name] / jit[name]))


if __name__ == "__main__":
    main()
