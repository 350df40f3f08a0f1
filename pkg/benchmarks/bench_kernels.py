"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from ancile import _backend
from ancile._backend import AD, CVM, KS


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    u = np.sort(rng.random((20_000, 30)), axis=1)
    u_big = np.sort(rng.random((2_000, 300)), axis=1)
    for label, arr in (("edf 20000x30", u), ("edf 2000x300", u_big)):
        for kind, name in ((KS, "KS"), (CVM, "CvM"), (AD, "AD")):
            yield f"{label} {name}", "edf_rows", (arr, kind)
    for m, p in ((1000, 1), (3000, 1), (3000, 29)):
        x = rng.normal(size=(m, p))
        y = rng.normal(size=(m, 1)) + x[:, :1] ** 2
        yield f"dcov_centered M={m} p={p}", "dcov_centered", (x, y)
        yield f"dcov_sums M={m} p={p}", "dcov_sums", (x, y)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = _backend.available()
    print(f"backends: {', '.join(names)}")
    if "cython" not in names:
        print("compiled kernels missing; only the fallback is timed")
    print(f"{'case':<32}" + "".join(f"{n:>12}" for n in names) + "   speedup")
    for label, fn, fargs in cases():
        t = {n: best_of(lambda: getattr(_backend.get(n), fn)(*fargs), args.repeat) for n in names}
        row = f"{label:<32}" + "".join(f"{t[n] * 1e3:>10.1f}ms" for n in names)
        if len(t) == 2:
            row += f"   {t['python'] / t['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
