"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import time

import numpy as np

from takiff_toda import kernels
from takiff_toda.lie import type_a


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    a = rng.uniform(-1, 1, 17)
    a[0] = 1.5
    for s, N, T in ((1, 2, 2.0), (2, 2, 5.0), (3, 4, 5.0)):
        rd = type_a(s)
        q0, p0 = rng.uniform(-1, 1, (2, rd.n_cartan, N + 1))
        nsteps = int(T / 1e-3)
        yield f"rk4 A{s} N={N} {nsteps} steps", lambda k, q0=q0, p0=p0, P=rd.pairing, n=nsteps: k.rk4(q0, p0, P, 1e-3, n)
        yield f"leapfrog A{s} N={N} {nsteps} steps", lambda k, q0=q0, p0=p0, P=rd.pairing, n=nsteps: k.leapfrog(q0, p0, P, 1e-3, n)
    yield "jet_exp N=16 x 10000", lambda k: [k.jet_exp(a) for _ in range(10000)]
    yield "jet_log N=16 x 10000", lambda k: [k.jet_log(a) for _ in range(10000)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", help="also write results here")
    args = parser.parse_args()
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled extension not available; timing the numpy fallback only")
    rows = []
    print(f"{'case':<34}" + "".join(f"{name:>12}" for name in impls) + ("     speedup" if len(impls) > 1 else ""))
    for label, fn in cases():
        t = {name: best_of(lambda m=mod: fn(m), args.repeat) for name, mod in impls.items()}
        line = f"{label:<34}" + "".join(f"{t[n]:>11.4f}s" for n in impls)
        if "cython" in t:
            line += f"{t['python'] / t['cython']:>11.1f}x"
        print(line)
        rows.append({"case": label, **t})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
