"""Compare the numba and numpy backends of the modular kernels.

    python benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 3]

Reports best-of-repeat wall time for rank_mod and matmul_mod on random
matrices mod a 26-bit prime, then for the certified rank computation on the
explicit Q x Q module at n = 5 (the workload the kernels exist for).
Results from the two backends are asserted equal.
"""

import argparse
import time

import numpy as np

from taft_depth import kernels
from taft_depth.greenring import quotient_class, tensor
from taft_depth.taftmod import decompose, module_of_Q_direct, tensor_module

P = 67108859  # largest prime below 2**26


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_random(sizes, repeat, rng):
    print(f"{'kernel':<12}{'size':>6}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for size in sizes:
        a = rng.integers(0, P, size=(size, size), dtype=np.int64)
        b = rng.integers(0, P, size=(size, size), dtype=np.int64)
        # rank-deficient input so elimination does not stop early
        a[size // 2 :] = a[: size - size // 2]
        for name, fn in (
            ("rank_mod", lambda: kernels.rank_mod(a, P)),
            ("matmul_mod", lambda: kernels.matmul_mod(a, b, P)),
        ):
            times, results = {}, {}
            for backend in kernels.available_backends():
                kernels.set_backend(backend)
                fn()  # warm-up, includes JIT compilation
                times[backend], results[backend] = best_of(fn, repeat)
            vals = list(results.values())
            assert all(np.array_equal(np.asarray(v), np.asarray(vals[0])) for v in vals)
            tn = times.get("numba", float("nan"))
            tp = times["numpy"]
            print(f"{name:<12}{size:>6}{tn:>12.4f}{tp:>12.4f}{tp / tn:>10.1f}")


def bench_qq(repeat, n=5):
    Q = module_of_Q_direct(n)
    want = tensor(quotient_class(n), quotient_class(n), n)
    print(f"\ncertified ranks on explicit Q x Q, n={n} (dimension {n**4})")
    for backend in kernels.available_backends():
        kernels.set_backend(backend)

        def run():
            # fresh module each time so the cached grading is not reused
            return decompose(tensor_module(Q, Q, check=False), "modular")

        run()
        t, got = best_of(run, repeat)
        assert got == want
        print(f"  {backend:<6} {t:.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    start = kernels.get_backend()
    try:
        bench_random(args.sizes, args.repeat, np.random.default_rng(args.seed))
        bench_qq(args.repeat)
    finally:
        kernels.set_backend(start)


if __name__ == "__main__":
    main()
