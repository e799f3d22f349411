"""Benchmark of the Monte-Carlo indicator kernel: compiled vs numpy fallback.

Run:  python3 benchmarks/bench_mc.py [samples]
"""

import sys
import time

import numpy as np

from weylcones import _mc_numpy
from weylcones import linalg as la
from weylcones import mc
from weylcones.rootdata import datum_for_label

try:
    from weylcones import _mckernel
except ImportError:
    _mckernel = None


def bench(kernel, samples, mats_a, mats_b, shifts, signs, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kernel.gamma_indicator_sum(samples, mats_a, mats_b, shifts, signs)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    rd = datum_for_label("a3")
    q = rd.minimal_parabolic
    x = la.vadd(la.vadd(rd.simple_coroots[0], rd.simple_coroots[1]), rd.simple_coroots[2])
    mats_a, mats_b, shifts, signs = mc._gamma_tables(rd, q, x)
    pair = rd.pair(q, rd.group)
    coroots = np.array([[float(v) for v in c] for c in pair.coroots])
    rng = np.random.default_rng(0)
    s = rng.uniform(-0.2, 1.2, size=(n, pair.dim))
    h = np.ascontiguousarray(s @ coroots)

    t_np, r_np = bench(_mc_numpy, h, mats_a, mats_b, shifts, signs)
    print(f"numpy fallback : {t_np*1e3:9.1f} ms   result={r_np}")
    if _mckernel is not None:
        t_cy, r_cy = bench(_mckernel, h, mats_a, mats_b, shifts, signs)
        print(f"cython kernel  : {t_cy*1e3:9.1f} ms   result={r_cy}")
        assert r_np == r_cy, "backends must agree bit for bit"
        print(f"speedup        : {t_np / t_cy:9.2f} x")
    else:
        print("cython kernel  : not built")


if __name__ == "__main__":
    main()
