"""Time the numpy and Cython kernel backends.

Run from the repository root after building the extension::

    python benchmarks/bench_kernels.py [--p 100] [--m 3] [--repeat 20]

Reports the best wall time per call for the fused W/U update, the block
soft-threshold and a full ADMM solve at a synthetic-benchmark scale.
"""

import argparse
import timeit

import numpy as np

from mdiffnet import kernels
from mdiffnet.admm import AdmmConfig, solve
from mdiffnet.covariance import sample_covariance
from mdiffnet.synthetic import GraphSpec, make_pair, sample_gaussian


def _time(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=100)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        kernels.get_backend("cython")
    except ImportError:
        print("Cython extension not built; only the numpy backend is available")
        backends = ["python"]
    else:
        backends = ["python", "cython"]

    rng = np.random.default_rng(args.seed)
    side = args.m * args.p
    A = rng.standard_normal((side, side))
    U0 = rng.standard_normal((side, side))
    W0 = rng.standard_normal((side, side))
    kappa = float(np.median(kernels.block_norms(A, args.m)))

    truth = make_pair(GraphSpec(p=args.p), args.m, 0.05, rng)
    sx = sample_covariance(sample_gaussian(truth.omega_x, args.n, rng, args.m))
    sy = sample_covariance(sample_gaussian(truth.omega_y, args.n, rng, args.m))
    cfg = AdmmConfig(track_objective=False)

    rows = []
    for name in backends:
        kernels.set_backend(name)
        U, W = U0.copy(), W0.copy()
        t_wu = _time(lambda: kernels.wu_update(A, U, W, args.m, kappa), args.repeat, 10)
        t_gst = _time(lambda: kernels.group_soft_threshold(A, args.m, kappa), args.repeat, 10)
        res = solve(sx, sy, 0.05, args.m, cfg)
        t_solve = _time(lambda: solve(sx, sy, 0.05, args.m, cfg), max(1, args.repeat // 10), 1)
        rows.append((name, t_wu, t_gst, t_solve, res.report.iterations))

    print(f"side {side} (p={args.p}, m={args.m}), best of {args.repeat}")
    print(f"{'backend':8s} {'wu_update':>12s} {'threshold':>12s} {'admm solve':>12s} {'iters':>6s}")
    for name, t_wu, t_gst, t_solve, iters in rows:
        print(f"{name:8s} {t_wu * 1e3:10.3f}ms {t_gst * 1e3:10.3f}ms {t_solve:11.3f}s {iters:6d}")
    if len(rows) == 2:
        py, cy = rows
        print(f"speedup  {py[1] / cy[1]:11.2f}x {py[2] / cy[2]:11.2f}x {py[3] / cy[3]:11.2f}x")


if __name__ == "__main__":
    main()
