"""Catalytic tree evaluation by root-of-unity interpolation.

The solver owns d+1 register blocks of pack_len field elements each. The
primitive ADD(u, acc, ws) adds the encoding of u's value into block acc
and leaves the d blocks listed in ws exactly as it found them, despite
using them as junk-filled workspace for the recursion. Evaluating the
root into block 0 therefore costs only the fixed register file, a stack
of loop counters, and the scratch of one extension sweep at a time; the
register contents are borrowed, not consumed.

For an inner node with children u_1..u_d the procedure runs m = 2^q - 1
rounds. Entering round i, workspace block j holds w^(i-1) * x_j + v_j
(x_j the junk found on entry, v_j the child's encoded value, w a fixed
generator of the multiplicative group). The round re-adds v_j to cancel
it (additions are recursive ADD calls and the field has characteristic
2), scales the block by w, adds v_j back, then accumulates the node
function's extension at the current workspace into acc. Over a full
cycle of the generator every term containing junk cancels, because
sum_{i in [m]} w^(i*s) = 0 for 0 < s < m and the extension's total
degree stays below m by the field choice, while the junk-free term
f(v_1..v_d) survives exactly once because m is odd. A last round of
ADDs strips the v_j off and returns the workspace to its entry state.

Recursive calls rotate register roles: child j accumulates into the
parent's workspace block j and treats all other blocks, the parent's
accumulator included, as its own workspace. This is why d+1 blocks
suffice for any depth.

Cost is the flip side: each child is re-evaluated 2m times per node, so
time grows like (2dm)^height. Budgets below refuse instances whose
estimated work is out of reach; callers choose this solver for its
space, never its speed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .. import gf2
from .extension import (
    BudgetError,
    DOMAIN_BUDGET,
    domain_size,
    extension_eval_all,
    point_len,
)
from .instance import (
    ExplicitTreeInstance,
    MalformedInstanceError,
    PaddedTreeInstance,
    TreeInstance,
)
from .meter import CMParams, SpaceMeter, build_meter, make_params

try:
    from . import _core
except ImportError:  # pure fallback, same semantics
    _core = None

OP_BUDGET_PURE = 1 << 24
OP_BUDGET_COMPILED = 1 << 33
_KERNEL_MAX_D = 32


@dataclass(frozen=True)
class CMResult:
    value: int
    registers: list
    meter: SpaceMeter
    params: CMParams
    backend: str
    stats: dict


def encode_value(params: CMParams, v: int) -> list[int]:
    if not 0 <= v < (1 << params.b):
        raise ValueError(f"value does not fit in {params.b} bits")
    if params.mode == "multilinear":
        return [(v >> j) & 1 for j in range(params.b)]
    return gf2.pack(params.field, v, params.b)


def decode_value(params: CMParams, words: list[int]) -> int:
    if params.mode == "multilinear":
        v = 0
        for j, e in enumerate(words):
            if e not in (0, 1):
                raise gf2.CorruptionError(f"coordinate {j} is {e}, not a bit")
            v |= e << j
        return v
    return gf2.unpack(params.field, words, params.b)


def estimate_ops(inst: TreeInstance, params: CMParams) -> int:
    """Rough count of field multiplications a solve would perform.

    Counts 2m re-evaluations of each child per node plus m extension
    sweeps of domain_size * (point_len + 2) multiplications. Memoized on
    node_key so implicit instances with shared subtrees stay cheap to
    estimate; the walk is over distinct subtrees, not calls.
    """
    m = params.m
    sweep = domain_size(params) * (point_len(params) + 2)
    cache: dict = {}

    def cost(u, depth):
        if depth > inst.h:
            raise MalformedInstanceError("depth exceeds declared height")
        if inst.is_leaf(u):
            return params.pack_len
        key = inst.node_key(u)
        if key in cache:
            return cache[key]
        kids_cost = sum(cost(kid, depth + 1) for kid in inst.children(u))
        total = 2 * m * kids_cost + m * sweep + 2 * params.d * m * params.pack_len
        cache[key] = total
        return total

    return cost(inst.root(), 1)


def _tabulate(inst: TreeInstance):
    """Arrays for the compiled kernel, or None if the instance is implicit."""
    base = inst.base if isinstance(inst, PaddedTreeInstance) else inst
    if not isinstance(base, ExplicitTreeInstance):
        return None
    import numpy as np

    order = []
    index = {}

    def walk(u):
        if u in index:
            return
        index[u] = len(order)
        order.append(u)
        if not base.is_leaf(u):
            for kid in base.children(u):
                walk(kid)

    walk(base.root())
    n = len(order)
    kind = np.zeros(n, dtype=np.int8)
    leaf_val = np.zeros(n, dtype=np.uint32)
    children = np.full((n, inst.d), -1, dtype=np.int32)
    table_off = np.full(n, -1, dtype=np.int64)
    chunks = []
    off = 0
    for i, u in enumerate(order):
        if base.is_leaf(u):
            leaf_val[i] = base.leaf_value(u)
        else:
            kind[i] = 1
            for j, kid in enumerate(base.children(u)):
                children[i, j] = index[kid]
            table_off[i] = off
            tab = np.asarray(base.table(u), dtype=np.uint32)
            chunks.append(tab)
            off += len(tab)
    tables = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint32)
    return {
        "kind": kind,
        "leaf_val": leaf_val,
        "children": children,
        "table_off": table_off,
        "tables": tables,
    }


def _kernel_ready(inst, params) -> tuple[bool, str]:
    if _core is None:
        return False, "compiled kernel not built"
    if params.q > 16:
        return False, f"kernel needs field tables, q = {params.q} > 16"
    if params.d > _KERNEL_MAX_D:
        return False, f"kernel caps fan-in at {_KERNEL_MAX_D}"
    base = inst.base if isinstance(inst, PaddedTreeInstance) else inst
    if not isinstance(base, ExplicitTreeInstance):
        return False, "kernel needs a stored instance, this one is implicit"
    return True, ""


def _choose_backend(backend: str, inst, params) -> str:
    if backend not in ("auto", "pure", "compiled"):
        raise ValueError(f"unknown backend {backend!r}")
    if os.environ.get("CATSIM_PURE"):
        if backend == "compiled":
            raise RuntimeError("backend='compiled' conflicts with CATSIM_PURE")
        return "pure"
    if backend == "pure":
        return "pure"
    ready, why = _kernel_ready(inst, params)
    if backend == "compiled":
        if not ready:
            raise RuntimeError(f"compiled backend unavailable: {why}")
        return "compiled"
    return "compiled" if ready else "pure"


def _solve_pure(inst, params, regs, domain_budget, stats):
    f = params.field
    d, m, t = params.d, params.m, params.pack_len
    omega = f.omega

    def add(u, acc, ws, depth):
        stats["calls"] += 1
        if depth > stats["depth_peak"]:
            stats["depth_peak"] = depth
        if inst.is_leaf(u):
            block = regs[acc]
            for j, e in enumerate(encode_value(params, inst.leaf_value(u))):
                block[j] ^= e
            return
        if depth >= inst.h:
            raise MalformedInstanceError("depth exceeds declared height")
        kids = inst.children(u)
        if len(kids) != d:
            raise ValueError("catalytic solver needs fan-in exactly d; pad the instance")
        for i in range(1, m + 1):
            for j, kid in enumerate(kids):
                wj = ws[j]
                child_ws = [acc] + [w for w in ws if w != wj]
                if i > 1:
                    add(kid, wj, child_ws, depth + 1)
                block = regs[wj]
                for k in range(t):
                    block[k] = gf2.mul(f, block[k], omega)
                add(kid, wj, child_ws, depth + 1)
            point = [e for w in ws for e in regs[w]]
            out = extension_eval_all(inst, u, point, params, domain_budget)
            stats["sweeps"] += 1
            block = regs[acc]
            for k in range(t):
                block[k] ^= out[k]
        for j, kid in enumerate(kids):
            child_ws = [acc] + [w for w in ws if w != ws[j]]
            add(kid, ws[j], child_ws, depth + 1)

    add(inst.root(), 0, list(range(1, d + 1)), 1)


def _solve_compiled(inst, params, regs, stats):
    import numpy as np

    arrays = _tabulate(inst)
    f = params.field
    exp = np.asarray(f._exp, dtype=np.uint32)
    log = np.zeros(1 << params.q, dtype=np.uint32)
    for i, e in enumerate(f._exp[: f.m]):
        log[e] = i
    reg_arr = np.array(regs, dtype=np.uint32)
    dinv = (
        np.asarray(params.packset.denom_inv, dtype=np.uint32)
        if params.mode == "packed"
        else np.zeros(0, dtype=np.uint32)
    )
    calls, sweeps, depth_peak = _core.solve(
        arrays["kind"],
        arrays["leaf_val"],
        arrays["children"],
        arrays["table_off"],
        arrays["tables"],
        exp,
        log,
        dinv,
        params.q,
        f.m,
        f.omega,
        0 if params.mode == "multilinear" else 1,
        params.d,
        params.b,
        params.pack_len,
        inst.h,
        reg_arr,
    )
    stats["calls"] = calls
    stats["sweeps"] = sweeps
    stats["depth_peak"] = depth_peak
    for r in range(params.d + 1):
        regs[r] = [int(x) for x in reg_arr[r]]


def solve_cook_mertz(
    inst: TreeInstance,
    mode: str = "multilinear",
    initial_registers: list | None = None,
    backend: str = "auto",
    domain_budget: int = DOMAIN_BUDGET,
    op_budget: int | None = None,
) -> CMResult:
    """Evaluate inst's root catalytically.

    The result's register file is the caller's initial_registers (zeros
    if omitted) with the root value's encoding added into block 0; every
    other block is returned bit-for-bit as it came in. The caller's list
    is not mutated.
    """
    params = make_params(inst.d, inst.b, mode)
    size = domain_size(params)
    if size > domain_budget:
        raise BudgetError(
            f"extension domain of {size} points exceeds the budget of {domain_budget}"
        )
    chosen = _choose_backend(backend, inst, params)
    if op_budget is None:
        op_budget = OP_BUDGET_COMPILED if chosen == "compiled" else OP_BUDGET_PURE
    est = estimate_ops(inst, params)
    if est > op_budget:
        raise BudgetError(
            f"estimated {est:.3g} field operations exceed the "
            f"{chosen} backend budget of {op_budget:.3g}"
        )

    d, t, q = params.d, params.pack_len, params.q
    if initial_registers is None:
        regs = [[0] * t for _ in range(d + 1)]
    else:
        if len(initial_registers) != d + 1 or any(
            len(blk) != t for blk in initial_registers
        ):
            raise ValueError(f"registers must be {d + 1} blocks of {t} elements")
        for blk in initial_registers:
            for e in blk:
                if not 0 <= e < (1 << q):
                    raise ValueError("register element outside the field")
        regs = [list(blk) for blk in initial_registers]
    y0 = list(regs[0])

    stats = {"calls": 0, "sweeps": 0, "depth_peak": 0}
    if chosen == "compiled":
        _solve_compiled(inst, params, regs, stats)
    else:
        _solve_pure(inst, params, regs, domain_budget, stats)
    stats["estimated_ops"] = est

    value = decode_value(params, [regs[0][j] ^ y0[j] for j in range(t)])
    meter = build_meter(params, stats["depth_peak"], stats["sweeps"] > 0)
    return CMResult(
        value=value,
        registers=regs,
        meter=meter,
        params=params,
        backend=chosen,
        stats=stats,
    )
