"""Time the compiled and pure-Python kernels on the same workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from bubblelab import kernels
from bubblelab.ball_lab import blowup_family
from bubblelab.ode_core import ProblemParams, ground_state


def _integrate():
    kernels.integrate_radial(3, 2.0, np.array([1.0]), 1e-3, 1.0, -1e-3 / 3, 50.0,
                             1e-10, 1e-10, 1e-10, 1e-3, 1.25, 100000)


def _ground_sweep():
    for g in np.linspace(1.1, 4.6, 12):
        ground_state(ProblemParams(3, float(g)))


def _blowup():
    blowup_family(ProblemParams(3, 3.0), 4.0, [2.0 ** k for k in range(3, 11)], 1.0)


WORKLOADS = [("integrate_radial (3, 2)", _integrate),
             ("ground_state sweep x12", _ground_sweep),
             ("blowup family x8", _blowup)]


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        import bubblelab._ckernels  # noqa: F401
        backends = ["python", "cython"]
    except ImportError:
        backends = ["python"]
        print("compiled extension not built; timing the Python kernels only")
    original = kernels.BACKEND
    results = {}
    try:
        for name in backends:
            kernels.use_backend(name)
            results[name] = [best_time(fn, args.repeat) for _, fn in WORKLOADS]
    finally:
        kernels.use_backend(original)
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for i, (label, _) in enumerate(WORKLOADS):
        row = f"{label:28s}" + "".join(f"{results[b][i] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{results['python'][i] / results['cython'][i]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
