"""Compare the numba kernels against the pure-Python fallback.

Each mode runs in its own interpreter because the switch is read at import
time.  Usage: ``python3 benchmarks/bench_kernels.py [--n 8] [--repeat 3]``.
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, sys, time
from arcindex import kernels
from arcindex.enumerate import Filters, generate

n, repeat = int(sys.argv[1]), int(sys.argv[2])
list(generate(5))  # compile outside the timed region
kernels.canonical_masks(next(generate(5)).grid.row_masks(), 5)
pool = [r.grid.row_masks() for r in generate(n, Filters(m4=False, prime=False))]
best = {}
for _ in range(repeat):
    t0 = time.perf_counter()
    recs = list(generate(n, Filters(m4=True, prime=False)))
    best["enumerate"] = min(best.get("enumerate", 1e9), time.perf_counter() - t0)
    t0 = time.perf_counter()
    for m in pool:
        kernels.canonical_masks(m, n)
    best["canonical"] = min(best.get("canonical", 1e9), time.perf_counter() - t0)
print(json.dumps({"numba": kernels.ENABLED, "records": len(recs), "pool": len(pool), **best}))
"""


def run(n: int, repeat: int, disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("ARCINDEX_DISABLE_NUMBA", None)
    if disable:
        env["ARCINDEX_DISABLE_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", CHILD, str(n), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run(args.n, args.repeat, disable=False)
    slow = run(args.n, args.repeat, disable=True)
    if fast["records"] != slow["records"]:
        sys.exit(f"modes disagree: {fast['records']} vs {slow['records']} records")
    print(f"n={args.n}: {fast['records']} survivors, {fast['pool']} canonical matrices, same in both modes")
    print(f"{'kernel':<12}{'numba s':>10}{'python s':>10}{'speedup':>9}")
    for k in ("enumerate", "canonical"):
        print(f"{k:<12}{fast[k]:>10.3f}{slow[k]:>10.3f}{slow[k] / fast[k]:>8.1f}x")


if __name__ == "__main__":
    main()
