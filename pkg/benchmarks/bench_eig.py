"""Benchmark the Jacobi eigensolver backends.

Times the numba-compiled sweep kernel against the vectorized NumPy fallback
on random Hermitian matrices, checks that their spectra agree, and prints a
table.  Run:

    python benchmarks/bench_eig.py [--sizes 4,9,16,25,64] [--reps 50]

The package-level backend selection is not touched; both kernels are driven
directly, so the script works regardless of NPTCERT_BACKEND.
"""

import argparse
import time

import numpy as np

from nptcert.linalg import OFF_DIAG_TOL, _jacobi_sweeps_numpy, _jacobi_sweeps_py

try:
    import numba

    _jacobi_sweeps_numba = numba.njit(cache=True)(_jacobi_sweeps_py)
except ImportError:
    _jacobi_sweeps_numba = None


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def run_kernel(kernel, h):
    a = h.copy()
    v = np.eye(h.shape[0], dtype=np.complex128)
    kernel(a, v, 100, OFF_DIAG_TOL * np.linalg.norm(h))
    return np.sort(a.diagonal().real)


def time_kernel(kernel, mats, reps):
    best = None
    for _ in range(reps):
        start = time.perf_counter()
        for h in mats:
            run_kernel(kernel, h)
        elapsed = (time.perf_counter() - start) / len(mats)
        best = elapsed if best is None else min(best, elapsed)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,9,16,25,64")
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--mats", type=int, default=8, help="matrices per size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    if _jacobi_sweeps_numba is not None:
        run_kernel(_jacobi_sweeps_numba, random_hermitian(rng, 4))  # JIT warmup
        header = f"{'n':>5} {'numba us':>12} {'numpy us':>12} {'speedup':>9} {'max |dw|':>12}"
    else:
        header = f"{'n':>5} {'numpy us':>12} {'max |dw|':>12}   (numba unavailable)"
    print(header)
    print("-" * len(header))

    for n in sizes:
        mats = [random_hermitian(rng, n) for _ in range(args.mats)]
        t_np = time_kernel(_jacobi_sweeps_numpy, mats, args.reps)
        if _jacobi_sweeps_numba is None:
            print(f"{n:>5} {t_np * 1e6:>12.1f} {'-':>12}")
            continue
        t_nb = time_kernel(_jacobi_sweeps_numba, mats, args.reps)
        drift = 0.0
        for h in mats:
            w_nb = run_kernel(_jacobi_sweeps_numba, h)
            w_np = run_kernel(_jacobi_sweeps_numpy, h)
            drift = max(drift, float(np.abs(w_nb - w_np).max()))
            assert drift < 1e-12 * max(1.0, float(np.abs(w_nb).max())), (
                f"backend disagreement at n={n}: {drift:.3e}"
            )
        print(f"{n:>5} {t_nb * 1e6:>12.1f} {t_np * 1e6:>12.1f} {t_np / t_nb:>8.1f}x {drift:>12.2e}")


if __name__ == "__main__":
    main()
