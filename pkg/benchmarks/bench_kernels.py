"""Compare the numba and numpy backends.

Each backend runs in its own interpreter because the choice is fixed at
import time by ``INTRES_NO_NUMBA``. Two workloads are timed: raw RREF on
random matrices of a few sizes, and ``intgldim`` of a small grid (which is
dominated by many tiny eliminations).

    python3 benchmarks/bench_kernels.py [--grid M N] [--repeat R]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from intres import backend, fflinalg as ff
from intres.artrans import intgldim
from intres.poset import make_grid

m, n, repeat = map(int, sys.argv[1:4])
rng = np.random.default_rng(0)
ff.rref(np.eye(3, dtype=np.int64), 2)  # compile or load cache outside the timers
out = {"backend": backend(), "rref": {}}
for size in (8, 32, 128):
    mats = [ff.random_matrix(rng, size, size + 4, 2) for _ in range(20)]
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for a in mats:
            ff.rref(a, 2)
        best = min(best, time.perf_counter() - t)
    out["rref"][str(size)] = best / len(mats)
t = time.perf_counter()
out["intgldim_value"] = intgldim(make_grid(m, n))
out["intgldim_seconds"] = time.perf_counter() - t
print(json.dumps(out))
"""


def run(no_numba: bool, m: int, n: int, repeat: int) -> dict:
    env = dict(os.environ)
    if no_numba:
        env["INTRES_NO_NUMBA"] = "1"
    else:
        env.pop("INTRES_NO_NUMBA", None)
    res = subprocess.run(
        [sys.executable, "-c", WORKER, str(m), str(n), str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, nargs=2, default=(3, 3))
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(False, *args.grid, args.repeat)
    slow = run(True, *args.grid, args.repeat)
    print(f"{'workload':<22}{fast['backend']:>12}{slow['backend']:>12}{'speedup':>10}")
    for size in fast["rref"]:
        a, b = fast["rref"][size], slow["rref"][size]
        print(f"{'rref ' + size + 'x' + str(int(size) + 4):<22}{a * 1e6:>10.1f}us{b * 1e6:>10.1f}us{b / a:>9.1f}x")
    a, b = fast["intgldim_seconds"], slow["intgldim_seconds"]
    label = f"intgldim {args.grid[0]}x{args.grid[1]}"
    print(f"{label:<22}{a:>11.2f}s{b:>11.2f}s{b / a:>9.1f}x")
    if fast["intgldim_value"] != slow["intgldim_value"]:
        raise SystemExit("backends disagree on intgldim")


if __name__ == "__main__":
    main()
