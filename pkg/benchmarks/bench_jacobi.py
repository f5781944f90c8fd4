"""Benchmark: numba-compiled vs pure-numpy Jacobi sweep kernels.

Runs the same structure-group sweeps through both code paths and prints a
small table.  The numba path is what HALMOS_LAB_PURE_NUMPY=0 (default)
selects at import time; here both implementations are timed directly.

Usage:  python benchmarks/bench_jacobi.py [--sizes 20,40,60] [--sweeps 3]
"""

import argparse
import time

import numpy as np

from halmos_lab._kernels import _sweep_numpy, _sweep_scalar, offdiag_energy_numpy
from halmos_lab.approx import to_component_stack
from halmos_lab.generate import perturb, point_evaluation_family, random_point_set
from halmos_lab.structured import SymmetryClass

try:
    import numba

    jit_sweep = numba.njit(cache=True)(_sweep_scalar)
    HAVE_NUMBA = True
except ImportError:
    jit_sweep = None
    HAVE_NUMBA = False


def bench(fn, stack, active, sweeps):
    a = stack.copy()
    n = a.shape[2]
    q = np.zeros((4, n, n))
    q[0] = np.eye(n)
    start = time.perf_counter()
    for _ in range(sweeps):
        fn(a, q, active, 1e-16)
    elapsed = time.perf_counter() - start
    return elapsed / sweeps, offdiag_energy_numpy(a)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="16,32,48,64")
    parser.add_argument("--sweeps", type=int, default=3)
    parser.add_argument("--d", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"numba available: {HAVE_NUMBA}")
    print(f"{'N':>5} {'class':>6} {'numpy s/sweep':>14} {'numba s/sweep':>14} {'speedup':>8}")
    for n in sizes:
        for sym in (SymmetryClass.REAL_SYMMETRIC, SymmetryClass.QUATERNION_SELF_DUAL):
            t = perturb(
                point_evaluation_family(random_point_set(args.d, n, seed=1), sym),
                0.2, seed=2)
            stack = to_component_stack(t)
            active = {SymmetryClass.REAL_SYMMETRIC: 1,
                      SymmetryClass.QUATERNION_SELF_DUAL: 4}[sym]
            if HAVE_NUMBA:
                warm_q = np.zeros((4, stack.shape[2], stack.shape[2]))
                warm_q[0] = np.eye(stack.shape[2])
                jit_sweep(stack.copy(), warm_q, active, 1e-16)  # compile once
            t_np, off_np = bench(_sweep_numpy, stack, active, args.sweeps)
            if HAVE_NUMBA:
                t_nb, off_nb = bench(jit_sweep, stack, active, args.sweeps)
                assert abs(off_np - off_nb) <= 1e-9 * max(off_np, 1.0)
                print(f"{n:>5} {sym.short:>6} {t_np:>14.4f} {t_nb:>14.4f} {t_np / t_nb:>8.1f}x")
            else:
                print(f"{n:>5} {sym.short:>6} {t_np:>14.4f} {'-':>14} {'-':>8}")


if __name__ == "__main__":
    main()
