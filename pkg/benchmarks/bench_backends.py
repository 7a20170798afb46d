"""Backend benchmark: JIT-compiled kernels vs the pure-NumPy fallback.

Usage:
    python benchmarks/bench_backends.py [--steps N] [--grid N] [--repeats N]

Times the two hot kernels on representative workloads:

* RK4 Lyapunov integration of the 6x6 three-mode system on the fig2a grid
  (17664 steps by default);
* the output-mode double-integral reduction (1600^2 grid pairs by default).

Both implementations are invoked directly, so the result does not depend on
the CVOPTOMECH_BACKEND environment variable — except that when the package
was imported with CVOPTOMECH_BACKEND=numpy there is no compiled kernel to
time, and only the fallback rows are printed. Each timing is the best of
--repeats runs (after one untimed warm-up call that also absorbs JIT
compilation).
"""

import argparse
import math
import timeit

import numpy as np

from cvoptomech import _kernels
from cvoptomech.gaussian import thermal_vacuum_initial
from cvoptomech.model import Scheme, SystemParams, build_drift_diffusion


def rk4_workload(n_steps):
    p = SystemParams(g1=4000.0, g2=4000.0, kappa1=10.0, kappa2=10.0,
                     delta=1000.0, n_th=10.0)
    dd = build_drift_diffusion(p, Scheme.SORENSEN_MOLMER)
    v0 = thermal_vacuum_initial(10.0).matrix
    dt = (2.0 * math.pi / 1000.0) / 4096.0
    cap = 1e12 * float(np.trace(v0))
    m = np.ascontiguousarray(dd.drift)
    mt = np.ascontiguousarray(dd.drift.T)
    d = np.ascontiguousarray(dd.diffusion)
    return (m, mt, d, np.ascontiguousarray(v0), dt, n_steps, 8, cap)


def integrals_workload(grid):
    # fig4a operating point at n_th = 10, tau = one pulse period
    big_gamma, delta, n_th = 0.5, 1000.0, 10.0
    c_plus = 4.0 * 667.0 + (n_th + 1.0)
    c_minus = 4.0 * 667.0 + n_th
    tau = 2.0 * math.pi / delta
    return (big_gamma, delta, n_th, c_plus, c_minus, tau, grid)


def best_of(fn, args, repeats):
    fn(*args)  # warm-up; compiles the kernel on first call
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeats))


def bench(title, impls, args, repeats, result_of):
    print(f"\n{title}")
    results, times = {}, {}
    for name, fn in impls.items():
        times[name] = best_of(fn, args, repeats)
        results[name] = result_of(fn(*args))
        print(f"  {name:>6}: {times[name]:8.4f} s")
    if len(impls) == 2:
        ratio = times["numpy"] / times["numba"]
        diff = np.abs(results["numba"] - results["numpy"]).max()
        print(f"  speedup (numpy/numba): {ratio:.1f}x   max |difference|: {diff:.3e}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=17664, help="RK4 step count")
    ap.add_argument("--grid", type=int, default=1600, help="double-integral grid points")
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats (best taken)")
    opts = ap.parse_args()

    print(f"active backend: {_kernels.BACKEND}")
    have_numba = _kernels.BACKEND == "numba"
    if not have_numba:
        print("compiled kernels unavailable (CVOPTOMECH_BACKEND=numpy); timing fallback only")

    rk4_impls = {"numpy": _kernels._rk4_lyapunov_py}
    int_impls = {"numpy": _kernels._output_integrals_numpy}
    if have_numba:
        rk4_impls["numba"] = _kernels.rk4_lyapunov
        int_impls["numba"] = _kernels.output_integrals

    bench(
        f"RK4 Lyapunov, 6x6, {opts.steps} steps",
        rk4_impls, rk4_workload(opts.steps), opts.repeats,
        result_of=lambda out: out[0][: out[1]],
    )
    bench(
        f"output-mode double integral, {opts.grid}^2 grid pairs",
        int_impls, integrals_workload(opts.grid), opts.repeats,
        result_of=lambda out: out,
    )


if __name__ == "__main__":
    main()
