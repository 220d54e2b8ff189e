"""Compare the numba and numpy kernel backends.

Run: python3 benchmarks/bench_kernels.py [--repeat N]

Part one times the raw kernels on a large permutation group table. Part two
runs whole-library workloads (subgroup lattices, hom enumeration) in fresh
interpreters with STRUCTVAL_BACKEND set, so each backend is used end to end.
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from structval import catalog
from structval.kernels import load_backend

WORKLOAD = """
import time
from structval import catalog
from structval.groups import all_subgroups, enumerate_homs
t = time.perf_counter()
groups = catalog.small_groups(12)
n_sub = sum(len(all_subgroups(G)) for G in groups)
S4 = catalog.symmetric(4)
n_sub += len(all_subgroups(S4))
n_hom = sum(len(enumerate_homs(G, H)) for G in groups[:14] for H in groups[:14])
print(n_sub, n_hom, time.perf_counter() - t)
"""


def best_of(fn, repeat: int) -> float:
    out = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t)
    return min(out)


def kernel_timings(repeat: int) -> None:
    G = catalog.symmetric(5)
    table = G.table
    rng = np.random.default_rng(0)
    seeds = [np.zeros(G.order, dtype=bool) for _ in range(50)]
    for s in seeds:
        s[rng.integers(0, G.order, size=2)] = True
    regular = np.ascontiguousarray(table)
    mapping = np.arange(G.order, dtype=np.int64)
    print(f"raw kernels on S5 (order {G.order}), best of {repeat}")
    print(f"{'kernel':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, call in [
        ("closure_mask x50", lambda k: [k.closure_mask(table, s) for s in seeds]),
        ("hom_witness", lambda k: k.hom_witness(mapping, table, table)),
        ("right_action_witness", lambda k: k.right_action_witness(regular, table)),
        ("orbit_labels", lambda k: k.orbit_labels(regular)),
    ]:
        times = {}
        for backend in ("numpy", "numba"):
            k = load_backend(backend)
            call(k)                      # compile / warm up
            times[backend] = best_of(lambda: call(k), repeat)
        print(f"{name:<24}{times['numpy'] * 1e3:>12.2f}{times['numba'] * 1e3:>12.2f}"
              f"{times['numpy'] / times['numba']:>10.1f}")


def workload_timings() -> None:
    print("\nend to end: subgroup lattices of order <= 12 plus S4, homs between 14 groups")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, STRUCTVAL_BACKEND=backend)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"{backend:<8} subgroups={out[0]} homs={out[1]} time={float(out[2]):.2f}s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    kernel_timings(args.repeat)
    workload_timings()


if __name__ == "__main__":
    main()
