#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled twin.

Runs the canonical-labeling search and the Koszul/normalization primitives
over a generated corpus of decorated graphs, and the sparse elimination
over random rational matrices, reporting per-backend timings.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time
from fractions import Fraction


def corpus(n_graphs=4000, seed=11):
    rng = random.Random(seed)
    out = []
    for _ in range(n_graphs):
        d = rng.choice((2, 3))
        n = rng.randint(2, 6)
        edges = []
        for _ in range(rng.randint(1, 7)):
            u, v = rng.randint(1, n), rng.randint(1, n)
            if u == v and d % 2 == 1:
                continue
            edges.append((u, v))
        decs = []
        degs = []
        for _ in range(rng.randint(0, 3)):
            decs.append((rng.randint(1, n), rng.randint(1, 3)))
            degs.append(rng.randint(1, 3))
        out.append((d, n, tuple(edges), tuple(decs), tuple(degs)))
    return out


def bench_kernels(mod, graphs, repeat):
    t0 = time.perf_counter()
    acc = 0
    for _ in range(repeat):
        for (d, n, edges, decs, degs) in graphs:
            res = mod.canonical_search(d, n, edges, decs, degs)
            if res is not None:
                acc += res[2]
    return time.perf_counter() - t0, acc


def bench_koszul(mod, repeat):
    rng = random.Random(3)
    perms = []
    for _ in range(3000):
        k = rng.randint(2, 9)
        p = list(range(k))
        rng.shuffle(p)
        perms.append((tuple(p), tuple(rng.randint(-3, 4) for _ in range(k))))
    t0 = time.perf_counter()
    acc = 0
    for _ in range(repeat):
        for (p, degs) in perms:
            acc += mod.koszul_sign(p, degs)
    return time.perf_counter() - t0, acc


def bench_elimination(repeat):
    from gcx.linalg import SparseMatQ

    rng = random.Random(7)
    mats = []
    for _ in range(30):
        rows, cols = rng.randint(10, 30), rng.randint(10, 30)
        m = SparseMatQ(rows, cols)
        for _ in range(rows * cols // 4):
            m.data[(rng.randrange(rows), rng.randrange(cols))] = Fraction(
                rng.randint(-9, 9) or 1
            )
        mats.append(m)
    t0 = time.perf_counter()
    acc = 0
    for _ in range(repeat):
        for m in mats:
            acc += m.rank()
    return time.perf_counter() - t0, acc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from gcx import _kernels

    backends = [("python", _kernels)]
    try:
        from gcx import _kernels_c

        if _kernels_c.__file__.endswith((".so", ".pyd")):
            backends.append(("c", _kernels_c))
    except ImportError:
        pass

    graphs = corpus()
    print("canonical_search over %d graphs x%d:" % (len(graphs), args.repeat))
    base = None
    checks = {}
    for (name, mod) in backends:
        dt, acc = bench_kernels(mod, graphs, args.repeat)
        checks.setdefault("canon", set()).add(acc)
        speed = "" if base is None else "  (%.2fx)" % (base / dt)
        if base is None:
            base = dt
        print("  %-7s %8.3fs%s" % (name, dt, speed))
    print("koszul_sign over 3000 permutations x%d:" % (10 * args.repeat))
    base = None
    for (name, mod) in backends:
        dt, acc = bench_koszul(mod, 10 * args.repeat)
        checks.setdefault("koszul", set()).add(acc)
        speed = "" if base is None else "  (%.2fx)" % (base / dt)
        if base is None:
            base = dt
        print("  %-7s %8.3fs%s" % (name, dt, speed))
    for k, v in checks.items():
        assert len(v) == 1, "backends disagree on %s" % k
    dt, acc = bench_elimination(args.repeat)
    print("sparse fraction-free elimination (30 matrices x%d): %.3fs [checksum %d]"
          % (args.repeat, dt, acc))


if __name__ == "__main__":
    main()
