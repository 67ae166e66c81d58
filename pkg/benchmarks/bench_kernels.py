"""Time each hot kernel under the compiled and the pure-Python backend.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from isoschemes import _pykernels, kernels
from isoschemes.solutions import perfect_matchings


def cases(rng):
    n = 18
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.35:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    ham = [0] * 11
    for u in range(11):
        for v in range(u + 1, 11):
            if rng.random() < 0.6:
                ham[u] |= 1 << v
                ham[v] |= 1 << u
    rows = [rng.getrandbits(400) for _ in range(400)]
    xs = list(range(10))
    partners = []
    for M in perfect_matchings(xs):
        p = [0] * 10
        for a, b in M:
            p[a], p[b] = b, a
        partners.append(p)
    full = (1 << n) - 1
    return {
        "components_mask": lambda k: k.components_mask(adj, full),
        "gf2_rank 400x400": lambda k: k.gf2_rank(rows),
        "hamiltonian_cycles n=11": lambda k: k.hamiltonian_cycles(ham, 11),
        "balanced_separator n=18": lambda k: k.balanced_separator(adj, full, full),
        "compat_rows |X|=10": lambda k: k.compat_rows(partners),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3, help="best-of repetitions per kernel")
    args = ap.parse_args()
    if kernels.compiled is None:
        print("compiled extension not importable; only the Python backend is timed")
    backends = [("python", _pykernels)] + ([("cython", kernels.compiled)] if kernels.compiled else [])
    for name, fn in cases(random.Random(0)).items():
        line = [f"{name:26s}"]
        times = {}
        for label, mod in backends:
            times[label] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
            line.append(f"{label}={times[label] * 1e6:11.1f} us")
        if len(times) == 2:
            line.append(f"speedup={times['python'] / times['cython']:6.1f}x")
        print("  ".join(line))


if __name__ == "__main__":
    main()
