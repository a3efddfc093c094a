"""Transfer-matrix kernel: numba vs numpy on random strings.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 2000x200,200x20000,10x200000]

Each size is ``cells x points``.  The numpy path is vectorized over points and
loops over cells in Python, so numba wins when cells dominate.
"""
import argparse
import time

import numpy as np

from indstring import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--sizes", default="2000x200,200x20000,10x200000")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    for size in args.sizes.split(","):
        cells, points = (int(v) for v in size.split("x"))
        run(cells, points, args.repeat, args.seed)


def run(cells, points, repeat, seed):
    rng = np.random.default_rng(seed)
    length = rng.uniform(0.01, 0.1, cells)
    rho = rng.uniform(0.0, 2.0, cells)
    dw = rng.normal(0.0, 0.5, cells)
    mass = np.where(rng.random(cells) < 0.1, rng.uniform(0, 1, cells), 0.0)
    z = rng.uniform(-50, 50, points) + 1j * rng.uniform(0, 5, points)

    ref = _kernels.transfer_numpy(z, length, rho, dw, mass)
    t_np = best_of(lambda: _kernels.transfer_numpy(z, length, rho, dw, mass), repeat)
    print(f"cells={cells} points={points}")
    print(f"numpy : {t_np * 1e3:9.2f} ms")
    if not _kernels.HAVE_NUMBA:
        print("numba : unavailable")
        return
    _kernels.transfer_numba(z[:2], length, rho, dw, mass)       # compile outside the timing
    got = _kernels.transfer_numba(z, length, rho, dw, mass)
    t_nb = best_of(lambda: _kernels.transfer_numba(z, length, rho, dw, mass), repeat)
    dev = max(float(np.max(np.abs(g - r) / np.maximum(np.abs(r), 1.0)))
              for g, r in zip(got[:4], ref[:4]))
    print(f"numba : {t_nb * 1e3:9.2f} ms  (threads={_kernels.numba.get_num_threads()})")
    print(f"speedup {t_np / t_nb:.1f}x, max relative deviation {dev:.2e}")


if __name__ == "__main__":
    main()
