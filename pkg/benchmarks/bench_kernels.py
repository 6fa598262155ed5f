"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 20] [--repeat 3] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
import timeit

import numpy as np

from moebius_walsh._backend import available_backends, get_backend


def cases(n: int):
    rng = np.random.default_rng(0)
    N = 1 << n
    table = rng.integers(-1, 2, size=N).astype(np.int64)
    coeffs = rng.integers(-N, N, size=N).astype(np.int64)
    small = 11
    f = rng.standard_normal(1 << small)
    kernel = rng.random(1 << small)
    primes = get_backend("python").linear_sieve(1 << 13)[1]
    lo = 1 << 24
    return {
        f"linear_sieve(2**{n})": lambda k: k.linear_sieve(N),
        f"mobius_block(2**24, +2**{n})": lambda k: k.mobius_block(lo, lo + N, primes),
        f"fwht_int64(2**{n})": lambda k: k.fwht_inplace(table.copy()),
        f"fwht_float64(2**{n})": lambda k: k.fwht_inplace(table.astype(np.float64)),
        f"level_sums(2**{n})": lambda k: k.level_sums(coeffs, n),
        f"xor_convolve(2**{small})": lambda k: k.xor_convolve(f, kernel),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args(argv)

    backends = available_backends()
    rows = []
    for name, fn in cases(args.n).items():
        row = {"case": name}
        for b in backends:
            k = get_backend(b)
            row[b] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)

    width = max(len(r["case"]) for r in rows)
    header = f"{'case':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    print(header + ("     speedup" if "cython" in backends else ""))
    for r in rows:
        line = f"{r['case']:<{width}}  " + "  ".join(f"{r[b] * 1e3:>8.2f}ms" for b in backends)
        if "speedup" in r:
            line += f"  {r['speedup']:>9.1f}x"
        print(line)
    if args.json:
        meta = {"python": sys.version.split()[0], "machine": platform.machine(), "n": args.n}
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "rows": rows}, fh, indent=2, sort_keys=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
