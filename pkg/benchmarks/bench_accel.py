"""Compare the numba and numpy variants of the hot kernels.

    python3 benchmarks/bench_accel.py [--repeat 5] [--scale 1.0]

Each kernel is run once to trigger compilation, then timed ``--repeat``
times; the best time per backend is reported with the largest difference
between the two outputs.
"""

import argparse
import time

import numpy as np

from skern import _kernels
from skern.zolotarev import GL_NODES, GL_WEIGHTS, PANELS_PER_UNIT, solve_modulus


def best_time(func, args, repeat):
    func(*args)
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = func(*args)
        times.append(time.perf_counter() - start)
    return min(times), out


def cases(scale):
    rng = np.random.default_rng(0)
    size = max(1, int(200_000 * scale))
    coeffs = rng.normal(size=64)
    x = rng.uniform(-1, 1, size=size)
    theta = np.linspace(0, np.pi, size)
    yield "clenshaw", _kernels.clenshaw_nb, _kernels.clenshaw_np, (coeffs, x)
    yield "multiplier", _kernels.multiplier_nb, _kernels.multiplier_np, (coeffs, theta, 6)

    rows = max(1, int(400_000 * scale))
    weights = np.ascontiguousarray(rng.normal(size=(rows, 3)))
    angles = np.linspace(0, np.pi, 512)
    table = np.ascontiguousarray(np.cos(np.outer(np.arange(3), angles)))
    mult = np.abs(2 * np.sin(angles / 2)) ** 4
    yield "batch_norms", _kernels.batch_norms_nb, _kernels.batch_norms_np, (weights, table, mult)

    p = solve_modulus(40)
    upper = np.linspace(0, np.pi, max(2, int(2000 * scale)))
    yield "arc_quadrature", _kernels.arc_quadrature_nb, _kernels.arc_quadrature_np, (
        upper, p.gamma_minus_one, p.epsilon, PANELS_PER_UNIT, GL_NODES, GL_WEIGHTS)


def max_diff(a, b):
    if isinstance(a, tuple):
        return max(max_diff(u, v) for u, v in zip(a, b))
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--scale", type=float, default=1.0, help="multiply problem sizes")
    args = parser.parse_args()

    print(f"{'kernel':<16s}{'numba [ms]':>12s}{'numpy [ms]':>12s}{'speedup':>10s}{'max diff':>12s}")
    for name, fast, slow, fargs in cases(args.scale):
        t_nb, out_nb = best_time(fast, fargs, args.repeat)
        t_np, out_np = best_time(slow, fargs, args.repeat)
        print(f"{name:<16s}{1e3 * t_nb:12.2f}{1e3 * t_np:12.2f}{t_np / t_nb:10.1f}{max_diff(out_nb, out_np):12.2e}")


if __name__ == "__main__":
    main()
