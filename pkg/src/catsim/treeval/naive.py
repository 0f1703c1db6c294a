"""Plain depth-first tree evaluation.

This is the baseline both for correctness (it is the oracle the catalytic
solver is tested against) and for space (its stack holds every ancestor's
partially filled child buffer, so it grows like d*b per level).
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import MalformedInstanceError, TreeInstance
from .meter import _ceil_lg


@dataclass(frozen=True)
class NaiveResult:
    value: int
    space_bits_peak: int
    nodes_visited: int
    depth_peak: int


def solve_naive(inst: TreeInstance, memo: bool = False) -> NaiveResult:
    """Evaluate the root by recursion.

    Space accounting charges, per stack level, the child-value buffer of
    the node being expanded (deg * b bits), a child cursor (ceil(lg d)),
    8 bits of control, and ceil(lg d) address bits for the path. The
    optional memo keyed on node_key is a cache for instances whose
    distinct addresses repeat subtrees; it is an accelerator for testing
    and is excluded from the meter, so only memo-free runs are meaningful
    space measurements.
    """
    b = inst.b
    lgd = _ceil_lg(inst.d)
    state = {"peak": 0, "cur": 0, "visited": 0, "depth_peak": 0}
    cache: dict = {}

    def visit(u, depth):
        if depth > inst.h:
            raise MalformedInstanceError("depth exceeds declared height")
        state["visited"] += 1
        state["depth_peak"] = max(state["depth_peak"], depth)
        if inst.is_leaf(u):
            return inst.leaf_value(u)
        if memo:
            key = inst.node_key(u)
            if key in cache:
                return cache[key]
        kids = inst.children(u)
        if len(kids) < 2:
            raise MalformedInstanceError(f"inner node {u!r} has fan-in {len(kids)}")
        frame = len(kids) * b + lgd + 8 + lgd
        state["cur"] += frame
        state["peak"] = max(state["peak"], state["cur"])
        vals = [visit(kid, depth + 1) for kid in kids]
        state["cur"] -= frame
        out = inst.apply(u, vals)
        if not 0 <= out < (1 << b):
            raise MalformedInstanceError(f"node function at {u!r} returned a non-{b}-bit value")
        if memo:
            cache[key] = out
        return out

    value = visit(inst.root(), 1)
    if state["peak"] == 0:
        state["peak"] = lgd + 8  # a bare leaf still occupies one control frame
    return NaiveResult(
        value=value,
        space_bits_peak=state["peak"],
        nodes_visited=state["visited"],
        depth_peak=state["depth_peak"],
    )
