"""Compare the compiled kernels against the pure-Python fallback.

Times the scalar Thomas sweep and the 2x2 block sweep on problem-shaped
systems of growing size, for both backends, plus the end-to-end solve time
of one full experiment step at paper settings.

Run:  python benchmarks/bench_backends.py [--max-exp 5]
"""

import argparse
import math
import time

import numpy as np

from biphaselab import make_grid, make_parameters, solve_coupled_fd, solve_q_fd
from biphaselab._kernels import BACKEND, _fallback
from biphaselab.solver import _assemble_coupled, assemble_q_system, eliminate_corner

try:
    from biphaselab._kernels import _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeats=5):
    fn()
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_scalar(impl, n, params, grid):
    system = eliminate_corner(assemble_q_system(params, grid))
    out = np.empty(n + 1)
    return best_of(lambda: impl.thomas_solve(system.sub, system.diag,
                                             system.sup, system.rhs, out))


def bench_block(impl, n, params, grid):
    sub, diag, sup, rhs = _assemble_coupled(params, grid)
    out = np.empty_like(rhs)
    return best_of(lambda: impl.block_thomas_solve(sub, diag, sup, rhs, out))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-exp", type=int, default=5,
                        help="largest size is 10**max_exp intervals")
    args = parser.parse_args()

    impls = [("python", _fallback)]
    if _compiled is not None:
        impls.append(("compiled", _compiled))
    print(f"active backend: {BACKEND}")
    print(f"{'n':>9}  {'kernel':<8}" + "".join(f"{name:>12}" for name, _ in impls)
          + f"{'ratio':>10}")

    for exp in range(3, args.max_exp + 1):
        n = 10 ** exp
        params = make_parameters(1.0, 1.5, 0.1, 0.5, 1.0)
        grid = make_grid(n)
        for label, bench in (("thomas", bench_scalar), ("block", bench_block)):
            times = [bench(impl, n, params, grid) for _, impl in impls]
            ratio = times[0] / times[-1] if len(times) > 1 else float("nan")
            cells = "".join(f"{t * 1e3:>10.3f}ms" for t in times)
            print(f"{n:>9}  {label:<8}{cells}{ratio:>9.1f}x")

    # end-to-end feel: one decoupled q solve and one coupled solve
    params = make_parameters(1.0, 1.5, 0.04, 0.5, 1.0)
    grid = make_grid(10000)
    t_q = best_of(lambda: solve_q_fd(params, grid))
    t_c = best_of(lambda: solve_coupled_fd(params, grid))
    print(f"\nfull q solve  (n=1e4, {BACKEND}): {t_q * 1e3:.2f} ms")
    print(f"coupled solve (n=1e4, {BACKEND}): {t_c * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
