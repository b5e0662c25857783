"""Compare the compiled and pure-Python kernels.

Times each kernel on fixed inputs, then a full built-in scenario per backend.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import time

from dogwalk import kernels, scenarios
from dogwalk.engine import run


def _time(fn, n):
    t0 = time.perf_counter()
    for _ in range(n):
        fn()
    return (time.perf_counter() - t0) / n


def bench(backend, repeat):
    kernels.set_backend(backend)
    world = scenarios.builtin("obscured_tank").world
    packed = world.packed()
    vel = (0.1, 0.0, 0.0, 0.0, 0.0, 0.05)
    cmd = (0.2, 0.1, 0.0, 0.0, 0.0, 0.1)
    tau = (0.5,) * 6
    active = (1, 1, 1, 1, 1, 1)
    n = 20000
    rows = {
        "cone_range": _time(lambda: kernels.cone_range(3.4, 2.1, 0.1, math.pi / 4, 3.0, packed), n),
        "clearance": _time(lambda: kernels.clearance(3.4, 2.1, packed), n),
        "integrate": _time(lambda: kernels.integrate(1.0, 2.0, -1.5, 0.2, vel, cmd, tau, active, 0.02), n),
        "wrap_angle": _time(lambda: kernels.wrap_angle(7.5), n),
    }
    best = math.inf
    for _ in range(repeat):
        sc = scenarios.builtin("case3")
        t0 = time.perf_counter()
        run(sc.world, sc.configs, sc.mode)
        best = min(best, time.perf_counter() - t0)
    rows["case3 run (s)"] = best
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    backends = kernels.available_backends()
    results = {b: bench(b, args.repeat) for b in backends}
    kernels.set_backend(backends[0])
    print(f"{'kernel':16s}" + "".join(f"{b:>14s}" for b in backends) + "   speedup")
    for name in results[backends[0]]:
        vals = [results[b][name] for b in backends]
        unit = 1.0 if name.endswith("(s)") else 1e6
        line = f"{name:16s}" + "".join(f"{v * unit:14.3f}" for v in vals)
        if "python" in results and "cython" in results:
            line += f"   {results['python'][name] / results['cython'][name]:6.1f}x"
        print(line)
    print("(per-call times in microseconds, scenario times in seconds)")


if __name__ == "__main__":
    main()
