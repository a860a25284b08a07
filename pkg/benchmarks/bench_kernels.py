"""Benchmark: compiled cost kernels versus the pure-Python fallback.

Runs the workloads that dominate real use (hole-set sweeps, whole-table
audits) on both backends and prints a comparison table.  Invoke with:

    python benchmarks/bench_kernels.py
"""
from __future__ import annotations

import itertools
import time

from cstlab import _kernel_py
from cstlab.bench import build_instance
from cstlab.falsify import random_instance
from cstlab.model import mask_of

try:
    from cstlab import _kernel_c
except ImportError:
    _kernel_c = None


def sweep_twcst(kernel_cls, weights, n, h):
    kernel = kernel_cls(weights, True)
    best = None
    for holes in itertools.combinations(range(1, n + 1), h):
        c = kernel.cost(1, n, mask_of(holes))
        if best is None or c < best:
            best = c
    return best


def sweep_gbst(kernel_cls, weights, n, h):
    kernel = kernel_cls(weights)
    best = None
    for holes in itertools.combinations(range(1, n + 1), h):
        c = kernel.cost(1, n, mask_of(holes))
        if best is None or c < best:
            best = c
    return best


def fuzz_workload(kernel_mod, trials=60):
    total = 0
    for seed in range(trials):
        inst = random_instance(8, 16, seed)
        gk = kernel_mod.GbstCostKernel(inst.weights)
        tk = kernel_mod.TwcstCostKernel(inst.weights, True)
        for i in range(1, 9):
            for j in range(i, 9):
                total += gk.cost(i, j, 0)
                total += tk.cost(i, j, 0)
    return total


def timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def main():
    i15 = build_instance("I15").instance
    block2 = build_instance("I31").instance

    cases = [
        (
            "twcst opt*(I15, 2): 105 hole sets",
            lambda mod: sweep_twcst(mod.TwcstCostKernel, i15.weights, 15, 2),
        ),
        (
            "gbst opt(I31 block2 [17,31], 0)",
            lambda mod: mod.GbstCostKernel(block2.weights).cost(17, 31, 0),
        ),
        (
            "fuzz mix: 60 random n=8 instances, all intervals",
            lambda mod: fuzz_workload(mod),
        ),
    ]

    backends = [("pure", _kernel_py)]
    if _kernel_c is not None:
        backends.append(("compiled", _kernel_c))
    else:
        print("compiled kernels not built; showing pure backend only\n")

    width = max(len(name) for name, _ in cases)
    print(f"{'workload':<{width}}  " + "".join(f"{b:>12}" for b, _ in backends) + "   speedup")
    for name, workload in cases:
        times = []
        values = []
        for _, mod in backends:
            value, dt = timed(workload, mod)
            times.append(dt)
            values.append(value)
        assert len(set(values)) == 1, f"backend disagreement on {name}: {values}"
        row = f"{name:<{width}}  " + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) == 2 and times[1] > 0:
            row += f"   {times[0] / times[1]:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
