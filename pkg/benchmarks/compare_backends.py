"""Compare the pure-Python and compiled kernel backends.

Usage: python benchmarks/compare_backends.py [--sizes 1000,10000,100000]

Times the three hot kernels on random inputs and checks that both backends
return byte-identical results while timing them, so a speedup never comes
from drifting semantics.
"""

import argparse
import time

import numpy as np

from reqcut.kernels import available_backends, get_backend


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def random_graph_arrays(n, m, rng):
    # tree first so component queries are not all trivial singletons
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    for i in range(1, min(n, m + 1)):
        eu[i - 1] = rng.integers(0, i)
        ev[i - 1] = i
    tree = min(n, m + 1) - 1
    eu[tree:] = rng.integers(0, n, size=m - tree)
    ev[tree:] = rng.integers(0, n, size=m - tree)
    return eu, ev


def bench_threshold_draws(backend, size, rng):
    return _time(backend.threshold_draws, 12345, size, 0.2)


def bench_component_labels(backend, size, rng):
    n = max(4, size // 4)
    eu, ev = random_graph_arrays(n, size, rng)
    removed = np.zeros(size, dtype=bool)
    removed[rng.integers(0, size, size // 10)] = True
    return _time(backend.component_labels, n, eu, ev, removed)


def bench_pair_distances(backend, size, rng):
    n = max(4, min(size, 3000))
    eu, ev = random_graph_arrays(n, size, rng)
    q = min(size, 2000)
    qs = rng.integers(0, n, q).astype(np.int64)
    qt = rng.integers(0, n, q).astype(np.int64)
    return _time(backend.pair_distances_unweighted, n, eu, ev, qs, qt)


BENCHES = [("threshold_draws", bench_threshold_draws),
           ("component_labels", bench_component_labels),
           ("pair_distances", bench_pair_distances)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="1000,10000,100000")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    names = available_backends()
    if "compiled" not in names:
        print("compiled backend not built; timing python alone")
    backends = {name: get_backend(name) for name in names}

    print(f"{'kernel':<18} {'size':>8} " +
          " ".join(f"{n + ' (s)':>14}" for n in names) +
          ("   speedup" if len(names) == 2 else ""))
    for kernel, fn in BENCHES:
        for size in sizes:
            times = {}
            outputs = {}
            for name in names:
                rng = np.random.default_rng(7)  # same inputs for both
                times[name], outputs[name] = fn(backends[name], size, rng)
            if len(names) == 2:
                a, b = (np.asarray(outputs[n]) for n in names)
                assert a.tobytes() == b.tobytes(), \
                    f"{kernel} size {size}: backends disagree"
            row = f"{kernel:<18} {size:>8} " + \
                  " ".join(f"{times[n]:>14.6f}" for n in names)
            if len(names) == 2:
                row += f"   {times['python'] / times['compiled']:>7.1f}x"
            print(row)


if __name__ == "__main__":
    main()
