#!/usr/bin/env python3
"""Benchmark: compiled kernel vs pure-Python twin.

Micro level times the raw kernel routines on both implementations in one
process; end-to-end level re-runs representative workloads in a subprocess
with POISGEO_PURE=1 so the whole stack really uses the fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time
from fractions import Fraction


def rand_poly(rng, n, terms, deg, coef=50):
    out = {}
    for _ in range(terms):
        m = tuple(rng.randint(0, deg) for _ in range(n))
        c = rng.randint(-coef, coef)
        if c:
            out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def micro_benchmarks(repeat):
    from poisgeo import _kernel_py as kpy

    try:
        from poisgeo import _kernel_cy as kcy
    except ImportError:
        print("compiled kernel unavailable; micro benchmarks skipped")
        return

    rng = random.Random(1)
    a = rand_poly(rng, 3, 80, 8)
    b = rand_poly(rng, 3, 80, 8)
    rows = [[rng.randint(-999, 999) for _ in range(50)] for _ in range(50)]
    pt = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(3))

    cases = [
        ("poly_mul 80x80 terms", lambda k: k.poly_mul(a, b)),
        ("poly_add", lambda k: k.poly_add(a, b)),
        ("poly_diff", lambda k: k.poly_diff(a, 1)),
        ("poly_eval", lambda k: k.poly_eval(a, pt)),
        ("int_row_echelon 50x50", lambda k: k.int_row_echelon(rows)),
    ]
    print(f"{'micro case':28s} {'pure (ms)':>10s} {'compiled (ms)':>14s} {'speedup':>8s}")
    for label, fn in cases:
        t_py = best_of(lambda: fn(kpy), repeat) * 1e3
        t_cy = best_of(lambda: fn(kcy), repeat) * 1e3
        print(f"{label:28s} {t_py:10.3f} {t_cy:14.3f} {t_py / t_cy:7.2f}x")


END_TO_END = r"""
import json, time
from poisgeo import kernel_name, levi_civita, load_spec_file, truncated_betti
from poisgeo import riemann_poisson_defect
from importlib import resources

def corpus(name):
    return str(resources.files("poisgeo") / "corpus" / (name + ".json"))

out = {"kernel": kernel_name}
_, spec, _ = load_spec_file(corpus("r3_quadratic_nonparallel"))
t0 = time.perf_counter()
for _ in range(10):
    D = levi_civita(spec.pi, spec.cometric)
    riemann_poisson_defect(spec.pi, spec.cometric, D)
out["christoffel_and_defect_x10"] = time.perf_counter() - t0

_, flat, _ = load_spec_file(corpus("r3_flat"))
t0 = time.perf_counter()
truncated_betti(flat.pi, 1, 4)
out["betti_p1_d4"] = time.perf_counter() - t0

_, so3, _ = load_spec_file(corpus("so3_star"))
t0 = time.perf_counter()
truncated_betti(so3.pi, 1, 4)
out["betti_so3_p1_d4"] = time.perf_counter() - t0

t0 = time.perf_counter()
truncated_betti(so3.pi, 1, 6)
out["betti_so3_p1_d6"] = time.perf_counter() - t0
print(json.dumps(out))
"""


def end_to_end():
    results = {}
    for pure in (False, True):
        env = dict(os.environ)
        env.pop("POISGEO_PURE", None)
        if pure:
            env["POISGEO_PURE"] = "1"
        proc = subprocess.run(
            [sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            raise SystemExit("end-to-end benchmark failed")
        results["pure" if pure else "default"] = json.loads(proc.stdout)
    default = results["default"]
    pure = results["pure"]
    print(f"\nend-to-end (default kernel: {default.pop('kernel')}, "
          f"fallback: {pure.pop('kernel')})")
    print(f"{'workload':28s} {'pure (s)':>10s} {'default (s)':>12s} {'speedup':>8s}")
    for key in default:
        t_d, t_p = default[key], pure[key]
        print(f"{key:28s} {t_p:10.3f} {t_d:12.3f} {t_p / t_d:7.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=7, help="best-of repetitions")
    args = parser.parse_args()
    micro_benchmarks(args.repeat)
    end_to_end()


if __name__ == "__main__":
    main()
