"""Time the propagation kernels: compiled extension vs numpy fallback.

Builds one representative gate problem (exact-detuning plan at
sigma/eps = 0.5 with a weak decay channel), precomputes the Hamiltonian
stacks exactly as the drivers in ``dynamics`` do, and times both kernel
implementations on identical inputs. Results are best-of-N wall times.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --steps 8192 --repeats 7
"""

import argparse
import math
import time

import numpy as np

from lambdagates import SystemParams, build_pulse_plan
from lambdagates import _core_py
from lambdagates.dynamics import TimeGrid
from lambdagates.model import cpt_transform, h_cpt, lindblad_generators

try:
    from lambdagates import _core
except ImportError:
    _core = None


def build_problem(steps):
    params = SystemParams.dependent(math.pi / 4.0, eps=0.04, sigma=0.02,
                                    gamma=1e-4)
    plan = build_pulse_plan(params, "exact", -math.pi / 2.0)
    grid = TimeGrid(t_end=params.t_g, steps=steps)

    h_mid = np.ascontiguousarray(h_cpt(params, plan, grid.midpoints()))
    h_half = np.ascontiguousarray(h_cpt(params, plan, grid.half_points()))

    V = cpt_transform(plan.theta_cpt, plan.alpha_cpt)
    lops = np.ascontiguousarray(
        [V @ L @ V.conj().T for L in lindblad_generators(params.gamma)])

    psi0 = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex) / math.sqrt(2.0)
    rho0 = np.outer(psi0, psi0.conj())
    return grid, h_mid, h_half, lops, psi0, rho0


def best_time(fn, repeats):
    fn()  # warm-up: JIT-free but primes caches and import scaffolding
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=4096,
                    help="time steps for the unitary kernel "
                         "(the master-equation kernel uses half)")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    grid, h_mid, h_half, lops, psi0, rho0 = build_problem(args.steps)

    cases = []
    u_args = (h_mid, grid.dt, psi0, 64)
    cases.append(("propagate_unitary_stack", grid.steps,
                  lambda impl: impl.propagate_unitary_stack(*u_args)))
    l_args = (h_half, lops, rho0, grid.dt, 64)
    cases.append(("lindblad_rk4", grid.steps,
                  lambda impl: impl.lindblad_rk4(*l_args)))

    impls = [("python", _core_py)]
    if _core is not None:
        impls.insert(0, ("compiled", _core))
    else:
        print("compiled extension not importable; timing the fallback only")

    width = max(len(name) for name, _, _ in cases)
    header = f"{'kernel':<{width}}  {'steps':>6}"
    for name, _ in impls:
        header += f"  {name:>12}"
    if len(impls) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for name, steps, runner in cases:
        times = [best_time(lambda impl=impl: runner(impl), args.repeats)
                 for _, impl in impls]
        row = f"{name:<{width}}  {steps:>6}"
        for t in times:
            row += f"  {t * 1e3:>9.2f} ms"
        if len(times) == 2:
            row += f"  {times[1] / times[0]:>7.1f}x"
        print(row)

    # Parity spot check on the timed inputs.
    if _core is not None:
        Uc = _core.propagate_unitary_stack(h_mid, grid.dt)[0]
        Up = _core_py.propagate_unitary_stack(h_mid, grid.dt)[0]
        rc = _core.lindblad_rk4(h_half, lops, rho0, grid.dt)[0]
        rp = _core_py.lindblad_rk4(h_half, lops, rho0, grid.dt)[0]
        print(f"\nparity: |dU| = {np.abs(Uc - Up).max():.2e}, "
              f"|drho| = {np.abs(rc - rp).max():.2e}")


if __name__ == "__main__":
    main()
