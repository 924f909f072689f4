#!/usr/bin/env python3
"""Compare the numba and pure-numpy special-function kernels.

Kernel timings call both backends in one process. The end-to-end timing
runs ``green`` in two subprocesses, one with IMPEDANCE_GREEN_DISABLE_NUMBA=1,
since the flag is read at import time.

    python3 benchmarks/bench_kernels.py [--sizes 15,150,1500,15000] [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from impedance_green import special
from impedance_green._accel import USE_NUMBA

KERNELS = {
    "K_0": lambda z, b: special.bessel_k_scaled(0, z, backend=b),
    "K_1/2": lambda z, b: special.bessel_k_scaled(1, z, backend=b),
    "K_5/2": lambda z, b: special.bessel_k_scaled(5, z, backend=b),
    "Kdiff_1": lambda z, b: special.bessel_k_scaled_diff(2, z, backend=b),
    "E1": lambda z, b: special.exp_integral_e1(z, backend=b),
}

GREEN_SNIPPET = """
import time
from impedance_green import ProblemParams, green, backend_name
cases = [(ProblemParams(2, 0.5), 2+1j), (ProblemParams(4, 2.0), 1+0.5j), (ProblemParams(3, 0.5), 1j)]
for p, s in cases:  # warm-up (jit compile / cache load)
    green([0.3] * (p.d - 1) + [1.0], [0.0] * (p.d - 1) + [0.5], p, s)
t = time.perf_counter()
n = 0
for i in range(40):
    for p, s in cases:
        green([0.3 + 0.01 * i] * (p.d - 1) + [1.0], [0.0] * (p.d - 1) + [0.5], p, s)
        n += 1
print(backend_name(), (time.perf_counter() - t) / n)
"""


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':8s} {'n':>7s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for n in sizes:
        mod = 10 ** rng.uniform(-1, np.log10(50), n)
        z = mod * np.exp(1j * rng.uniform(-np.pi / 2, np.pi / 2, n))
        for name, f in KERNELS.items():
            f(z, "numba")  # compile outside the timing
            t_nb = best_of(lambda: f(z, "numba"), repeat)
            t_np = best_of(lambda: f(z, "numpy"), repeat)
            print(f"{name:8s} {n:7d} {t_nb:11.3e} {t_np:11.3e} {t_np / t_nb:8.2f}")


def bench_green():
    print("\nend-to-end green(), mean seconds per call")
    for disable in ("0", "1"):
        env = dict(os.environ, IMPEDANCE_GREEN_DISABLE_NUMBA=disable)
        res = subprocess.run([sys.executable, "-c", GREEN_SNIPPET], env=env,
                             capture_output=True, text=True, check=True)
        backend, sec = res.stdout.split()
        print(f"  {backend:6s} {float(sec):.3e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="15,150,1500,15000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-green", action="store_true")
    args = ap.parse_args()
    if not USE_NUMBA:
        sys.exit("numba is disabled in this process; unset IMPEDANCE_GREEN_DISABLE_NUMBA")
    bench_kernels([int(s) for s in args.sizes.split(",")], args.repeat)
    if not args.skip_green:
        bench_green()


if __name__ == "__main__":
    main()
