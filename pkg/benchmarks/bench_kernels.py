"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per workload with the best wall time of each backend and the
speedup, and checks that both backends return the same numbers.
"""
import argparse
import timeit

import numpy as np

from totreal import _kernels_py, _simplex
from totreal import cauchy as cz
from totreal import lagrangian as lg
from totreal import surfaces as sf

try:
    from totreal import _kernels_ext
except ImportError:
    _kernels_ext = None


def ball_workload(m, grid, n_balls, seed=0):
    M = lg.gradient_graph(lg.random_polynomial(m, seed).potential(-1, 1), grid)
    rng = np.random.default_rng(seed)
    fixed = (M._real_vertices, np.ascontiguousarray(M.masses))
    tables = (np.ascontiguousarray(_simplex.subdivision(m, 2)),
              np.ascontiguousarray(_simplex.lattice(m, sf.LEAF_ORDER)))
    balls = []
    for _ in range(n_balls):
        c = M.centroids[rng.integers(len(M))]
        r = float(rng.uniform(0.1, 0.5))
        balls.append((np.concatenate([c.real, c.imag]), r))

    def run(kernel):
        return [kernel(*fixed, c, r, *tables, r / 4, sf.MAX_REFINE_DEPTH) for c, r in balls]

    return f"ball_mass m={m} grid={grid} simplices={len(M)} balls={n_balls}", "ball_mass", run


def cauchy_workload(N, n_targets, seed=0):
    G = cz.ellipse(2.0, 1.0, N)
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    z = rng.uniform(-1, 1, n_targets) + 1j * rng.uniform(-0.5, 0.5, n_targets)

    def run(kernel):
        return kernel(G.nodes, w, z)

    return f"cauchy_sum N={N} targets={n_targets}", "cauchy_sum", run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels_ext is None:
        print("compiled extension not built; only the numpy backend is available")
    workloads = [
        ball_workload(1, 64, 200),
        ball_workload(2, 12, 50),
        ball_workload(3, 5, 5),
        cauchy_workload(256, 4096),
        cauchy_workload(1024, 16384),
    ]
    print(f"{'workload':<52} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for name, kernel, run in workloads:
        py = getattr(_kernels_py, kernel)
        t_py = min(timeit.repeat(lambda: run(py), number=1, repeat=args.repeat))
        if _kernels_ext is None:
            print(f"{name:<52} {t_py:>9.4f}s {'-':>10} {'-':>8}")
            continue
        ext = getattr(_kernels_ext, kernel)
        t_ext = min(timeit.repeat(lambda: run(ext), number=1, repeat=args.repeat))
        np.testing.assert_allclose(np.asarray(run(ext)), np.asarray(run(py)), rtol=1e-10, atol=1e-14)
        print(f"{name:<52} {t_py:>9.4f}s {t_ext:>9.4f}s {t_py / t_ext:>7.1f}x")

if __name__ == "__main__":
    main()
