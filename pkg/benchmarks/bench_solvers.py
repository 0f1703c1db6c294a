#!/usr/bin/env python3
"""Compare the pure-Python and compiled catalytic solvers.

Builds random full d-ary trees with stored node tables, solves each one
with both register-sweep backends, and reports best-of-N wall times next
to the memoryless baseline. Shapes whose field-operation estimate exceeds
a backend's budget show up as "over budget" instead of a time; the two
largest shapes are there precisely to demonstrate that the compiled
kernel keeps going after the pure backend has to refuse.

Usage: python3 benchmarks/bench_solvers.py [--repeats N] [--seed S]
"""

import argparse
import random
import time

from catsim.treeval import (
    BudgetError,
    estimate_ops,
    make_params,
    pad_instance,
    solve_cook_mertz,
    solve_naive,
)
from catsim.treeval.instance import ExplicitTreeInstance

# (mode, d, b, h), smallest first; the last two exceed the pure op budget
SHAPES = [
    ("multilinear", 2, 1, 4),
    ("multilinear", 2, 2, 3),
    ("multilinear", 3, 1, 3),
    ("packed", 2, 2, 3),
    ("packed", 3, 2, 2),
    ("multilinear", 3, 2, 3),
    ("multilinear", 2, 2, 4),
    ("multilinear", 3, 2, 4),
    ("packed", 3, 2, 3),
]


def full_tree(rng, d, b, h):
    leaves, inner = {}, {}

    def build(addr, depth):
        if depth == h:
            leaves[addr] = rng.randrange(1 << b)
            return
        kids = tuple(addr + (k,) for k in range(d))
        inner[addr] = (kids, [rng.randrange(1 << b) for _ in range(1 << (d * b))])
        for kid in kids:
            build(kid, depth + 1)

    build((), 1)
    return ExplicitTreeInstance(d, b, h, (), leaves, inner)


def best_of(repeats, fn):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def bench_backend(inst, mode, backend, repeats):
    try:
        dt, res = best_of(
            repeats, lambda: solve_cook_mertz(inst, mode=mode, backend=backend)
        )
    except BudgetError:
        return None, None
    except RuntimeError as exc:  # kernel not built
        return None, str(exc)
    return dt, res.value


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=3, help="best-of count")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(
        f"{'mode':<12} {'d':>2} {'b':>2} {'h':>2} {'ops':>6} "
        f"{'naive':>10} {'pure':>12} {'compiled':>12} {'speedup':>8}"
    )
    for mode, d, b, h in SHAPES:
        inst = pad_instance(full_tree(rng, d, b, h))
        est = estimate_ops(inst, make_params(d, b, mode))
        t_naive, naive_res = best_of(args.repeats, lambda: solve_naive(inst))

        t_pure, v_pure = bench_backend(inst, mode, "pure", args.repeats)
        t_comp, v_comp = bench_backend(inst, mode, "compiled", args.repeats)
        for v in (v_pure, v_comp):
            if isinstance(v, int) and v != naive_res.value:
                raise AssertionError(f"backend disagrees with naive on {mode} {d},{b},{h}")

        pure_s = f"{t_pure * 1e3:9.2f} ms" if t_pure else "over budget"
        if t_comp:
            comp_s = f"{t_comp * 1e3:9.2f} ms"
        elif isinstance(v_comp, str):
            comp_s = "unavailable"
        else:
            comp_s = "over budget"
        ratio = f"{t_pure / t_comp:7.1f}x" if t_pure and t_comp else "-"
        print(
            f"{mode:<12} {d:>2} {b:>2} {h:>2} 2^{est.bit_length() - 1:<4d} "
            f"{t_naive * 1e3:7.2f} ms {pure_s:>12} {comp_s:>12} {ratio:>8}"
        )


if __name__ == "__main__":
    main()
