"""Compare the numba and numpy elimination kernels.

Run with ``python3 benchmarks/bench_rref.py``.  Times modular RREF on random
matrices, then a few end-to-end pipelines with each backend selected in turn
(the same switch HOMLIE_JIT=0 makes at import time).
"""

import argparse
import time

import numpy as np

from homlie.algebra import direct_sum, heisenberg, nilpotent_alpha_cover, sl2
from homlie.capability import is_capable
from homlie.exactlin import rref_mod_p, set_jit
from homlie.exactlin._kernels import JIT_AVAILABLE
from homlie.homology import homology

P = 2**31 - 1


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(0)
    print(f"{'shape':>12} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
        ref = rref_mod_p(a, P, backend="numpy")
        got = rref_mod_p(a, P, backend="numba")  # also compiles
        assert np.array_equal(ref[0], got[0])
        t_np = best_of(lambda: rref_mod_p(a, P, backend="numpy"), repeat)
        t_nb = best_of(lambda: rref_mod_p(a, P, backend="numba"), repeat)
        print(f"{str(a.shape):>12} {t_np * 1e3:10.2f} {t_nb * 1e3:10.2f} {t_np / t_nb:8.1f}x")


def bench_pipelines(repeat):
    cases = {
        "H2(H1+H1)": lambda: homology(direct_sum(heisenberg(1), heisenberg(1)), up_to=3),
        "capability(sl2+H1)": lambda: is_capable(direct_sum(sl2(), heisenberg(1))),
        "capability(K4)": lambda: is_capable(nilpotent_alpha_cover()),
    }
    print(f"\n{'pipeline':>20} {'numpy s':>9} {'numba s':>9}")
    for name, fn in cases.items():
        row = []
        for jit in (False, True):
            set_jit(jit)
            fn()
            row.append(best_of(fn, repeat))
        print(f"{name:>20} {row[0]:9.3f} {row[1]:9.3f}")
    set_jit(True)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 128, 256])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if not JIT_AVAILABLE:
        raise SystemExit("numba is not importable")
    bench_kernels(args.sizes, args.repeat)
    bench_pipelines(args.repeat)


if __name__ == "__main__":
    main()
