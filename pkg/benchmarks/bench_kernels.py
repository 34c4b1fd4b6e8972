"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--size N] [--repeat R]

Both implementations run in the same process regardless of
FOLNER_DISABLE_NUMBA; numba compilation happens in a warm-up call that is
not timed.
"""
import argparse
import timeit

import numpy as np

from folner import kernels


def cases(size: int, rng: np.random.Generator):
    keys = rng.integers(0, 2 ** 63, size=size, dtype=np.int64).astype(np.uint64)
    u = rng.random(size)
    cum = np.cumsum([0.1, 0.2, 0.3, 0.4])
    lines = max(1, size // 256)
    ul = rng.random((lines, 256))
    pi_cum = np.array([2 / 3, 1.0])
    p_cum = np.cumsum([[0.9, 0.1], [0.2, 0.8]], axis=1)
    rows = rng.integers(1, 3, size=(size // 4, 4)).astype(np.uint8)
    coords = rng.integers(-1000, 1000, size=(size, 3)).astype(np.int64)
    return {
        "splitmix64": (keys,),
        "uniform": (keys,),
        "categorical": (u, cum),
        "markov_lines": (ul, pi_cum, p_cum),
        "pack_codes": (rows, 1),
        "cantor_index": (coords,),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=1 << 18)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.NUMBA is None:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, a in cases(args.size, rng).items():
        f_np = getattr(kernels.NUMPY, name)
        f_nb = getattr(kernels.NUMBA, name)
        f_nb(*a)
        if not np.array_equal(f_np(*a), f_nb(*a)):
            raise SystemExit(f"{name}: implementations disagree")
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<14}{t_np:>12.3f}{t_nb:>12.3f}{t_np / t_nb:>10.1f}x")


if __name__ == "__main__":
    main()
