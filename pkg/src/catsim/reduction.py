"""From machine runs to tree evaluation.

A run of t steps is cut into B time blocks of c steps. For each tape h and
block i there is a value: the machine state and tape-h head position at the
end of block i, together with the end-of-block contents of the tape blocks
declared active during block i, all packed into one fixed-width bit string
(a content string). Values form a tree: computing (h, i) needs the contents
of each declared active block from whoever touched it last, plus the
previous block's value on every tape for the state and head positions.
Sources (initial block contents) are the leaves.

The movement labels that define "declared active" come from a candidate
GraphEncoding, which the driver does not know in advance. Every node
function is total: inputs that are failures, carry the wrong provenance
tags, disagree on the machine state, put a head in the wrong block, read
outside the declared blocks, or make the head move differently from the
declared labels all map to a canonical FAIL value. A non-FAIL root value
therefore certifies that the whole derivation is consistent, i.e. that the
candidate encoding describes the actual run; the driver simply tries
candidates until one certifies, and reads the machine state out of the
root.

Content string layout, low bits first; values read with bit k of the int
being position k:

    fail (1) | tag_h | tag_i | state | pos | slot1 | slot2

tag_h and tag_i name the node that produced the value ((h, i), with i = 0
for sources). Each slot is a presence bit followed by c cells of
ceil(lg |alphabet|) bits; slots follow the declared active blocks in
order, starting block first. Canonical FAIL is the bare fail bit: the
integer 1.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .graphs import (
    BudgetExceededError,
    GraphEncoding,
    active_blocks,
    block_index,
    enumerate_encodings,
    is_source,
    predecessors,
    trace_to_encoding,
)
from .machine import Machine, block_of, run_direct
from .treeval import (
    TreeInstance,
    meter_closed_form,
    naive_bits_closed_form,
    pad_instance,
    solve_cook_mertz,
    solve_naive,
)


def _bits_for(n: int) -> int:
    """ceil(log2 n); 0 for n == 1."""
    return (n - 1).bit_length() if n >= 2 else 0


class ContentLayout:
    """Field offsets and widths of one tape's content string."""

    FAIL = 1

    def __init__(self, machine: Machine, c: int, B: int):
        self.p = machine.p
        self.c = c
        self.B = B
        self.sym_bits = _bits_for(len(machine.alphabet))
        self.state_bits = _bits_for(len(machine.states))
        self.tag_h_bits = _bits_for(machine.p)
        self.tag_i_bits = _bits_for(B + 1)
        self.pos_bits = _bits_for(c * (B + 1))
        self.slot_bits = 1 + c * self.sym_bits
        off = 1
        self.tag_h_off = off
        off += self.tag_h_bits
        self.tag_i_off = off
        off += self.tag_i_bits
        self.state_off = off
        off += self.state_bits
        self.pos_off = off
        off += self.pos_bits
        self.slot_off = (off, off + self.slot_bits)
        self.width = off + 2 * self.slot_bits

    def _field(self, value: int, off: int, bits: int) -> int:
        return (value >> off) & ((1 << bits) - 1)

    def failed(self, value: int) -> bool:
        return bool(value & 1)

    def tag(self, value: int) -> tuple[int, int]:
        """(h, i) that claims to have produced this value; i = 0 for sources."""
        return (
            self._field(value, self.tag_h_off, self.tag_h_bits) + 1,
            self._field(value, self.tag_i_off, self.tag_i_bits),
        )

    def state(self, value: int) -> int:
        return self._field(value, self.state_off, self.state_bits)

    def pos(self, value: int) -> int:
        return self._field(value, self.pos_off, self.pos_bits)

    def slot(self, value: int, idx: int) -> tuple[bool, list[int]]:
        """(present, cell symbols) of slot idx."""
        raw = self._field(value, self.slot_off[idx], self.slot_bits)
        cells = [
            (raw >> (1 + k * self.sym_bits)) & ((1 << self.sym_bits) - 1)
            for k in range(self.c)
        ]
        return bool(raw & 1), cells

    def build(self, h: int, i: int, state: int, pos: int, blocks: list[list[int]]) -> int:
        """Non-FAIL content string; blocks lists the active blocks' cells."""
        out = 0
        out |= (h - 1) << self.tag_h_off
        out |= i << self.tag_i_off
        out |= state << self.state_off
        out |= pos << self.pos_off
        for idx, cells in enumerate(blocks):
            raw = 1
            for k, s in enumerate(cells):
                raw |= s << (1 + k * self.sym_bits)
            out |= raw << self.slot_off[idx]
        return out


def leaf_content(
    machine: Machine, input_str: str, layout: ContentLayout, h: int, v: int
) -> int:
    """Initial contents of block v of tape h, as a source content string.

    The input sits on tape 1 from cell 0; everything else is blank. Block 1
    additionally carries the start state, matching the time-0 snapshot.
    """
    c = layout.c
    base = (v - 1) * c
    cells = [machine.blank] * c
    if h == 1:
        for k in range(c):
            if base + k < len(input_str):
                cells[k] = machine.symbol_index(input_str[base + k])
    state = machine.start if v == 1 else 0
    return layout.build(h, 0, state, base, [cells])


def block_step(
    machine: Machine,
    layout: ContentLayout,
    enc: GraphEncoding,
    h: int,
    i: int,
    values: list[int],
) -> int:
    """Node function of (h, i): total, FAIL-preserving, FAIL-defaulting.

    values follow predecessors(enc, h, i): per tape one content slot per
    declared active block, then per tape a state slot. The function
    re-simulates the c steps of time block i on the declared blocks and
    emits tape h's content string, or FAIL on any inconsistency.
    """
    p, c = enc.p, enc.c
    preds = predecessors(enc, h, i)
    if len(values) != len(preds):
        raise ValueError(f"node ({h},{i}) takes {len(preds)} inputs, got {len(values)}")

    for value, provider in zip(values, preds):
        if layout.failed(value):
            return layout.FAIL
        want = (provider[0], 0) if is_source(provider) else provider
        if layout.tag(value) != want:
            return layout.FAIL

    # gather declared cells; slot k of a provider holds its k-th active block
    k = 0
    cells = [{} for _ in range(p)]
    allowed = [set() for _ in range(p)]
    for hp in range(1, p + 1):
        for v in active_blocks(enc, hp, i):
            value, provider = values[k], preds[k]
            k += 1
            if is_source(provider):
                if layout.pos(value) != (v - 1) * c:
                    return layout.FAIL
                idx, count = 0, 1
            else:
                actives = active_blocks(enc, provider[0], provider[1])
                idx, count = actives.index(v), len(actives)
            for j in range(2):
                present, _ = layout.slot(value, j)
                if present != (j < count):
                    return layout.FAIL
            _, block_cells = layout.slot(value, idx)
            base = (v - 1) * c
            for off, sym in enumerate(block_cells):
                cells[hp - 1][base + off] = sym
                allowed[hp - 1].add(base + off)

    # state slots: agreed state, and each head inside its declared block
    state = None
    heads = []
    for hp in range(1, p + 1):
        value = values[k]
        k += 1
        s, pos = layout.state(value), layout.pos(value)
        if state is None:
            state = s
        elif state != s:
            return layout.FAIL
        if block_of(pos, c) != block_index(enc, hp, i):
            return layout.FAIL
        heads.append(pos)

    # run the block; reads and writes outside the declared blocks fail
    visited = [{block_of(heads[hp], c)} for hp in range(p)]
    for _ in range(c):
        reads = []
        for hp in range(p):
            if heads[hp] not in allowed[hp]:
                return layout.FAIL
            reads.append(cells[hp][heads[hp]])
        state, writes, moves = machine.delta[(state, tuple(reads))]
        for hp in range(p):
            cells[hp][heads[hp]] = writes[hp]
            heads[hp] = max(0, heads[hp] + moves[hp])
            visited[hp].add(block_of(heads[hp], c))

    # observed movement must equal the declared labels, every tape
    for hp in range(1, p + 1):
        s0 = block_index(enc, hp, i)
        mv, extra = enc.label(hp, i)
        if block_of(heads[hp - 1], c) - s0 != mv:
            return layout.FAIL
        if frozenset(blk - s0 for blk in visited[hp - 1] if blk != s0) != extra:
            return layout.FAIL

    out_blocks = []
    for v in active_blocks(enc, h, i):
        base = (v - 1) * c
        out_blocks.append([cells[h - 1][base + off] for off in range(c)])
    return layout.build(h, i, state, heads[h - 1], out_blocks)


class ReductionTreeInstance(TreeInstance):
    """The implicit tree whose root value summarizes tape 1 after block B.

    Addresses are tuples of predecessor-slot indices walked from the root
    node (1, B); the empty tuple is the root. Distinct addresses reaching
    the same graph node have equal values, which node_key exposes so
    memoized solvers collapse the walk to one evaluation per graph node.
    """

    def __init__(self, machine: Machine, input_str: str, enc: GraphEncoding):
        self.machine = machine
        self.input_str = input_str
        self.enc = enc
        self.layout = ContentLayout(machine, enc.c, enc.B)
        self.d = 3 * enc.p
        self.b = self.layout.width
        self.h = enc.B + 1

    def root(self):
        return ()

    def resolve(self, u):
        node = (1, self.enc.B)
        for k in u:
            node = predecessors(self.enc, *node)[k]
        return node

    def node_key(self, u):
        return self.resolve(u)

    def is_leaf(self, u):
        return is_source(self.resolve(u))

    def children(self, u):
        node = self.resolve(u)
        return [u + (k,) for k in range(len(predecessors(self.enc, *node)))]

    def leaf_value(self, u):
        h, _, v = self.resolve(u)
        return leaf_content(self.machine, self.input_str, self.layout, h, v)

    def apply(self, u, inputs):
        node = self.resolve(u)
        return block_step(self.machine, self.layout, self.enc, *node, inputs)


# ---- the driver ----


def _oracle_encoding(machine: Machine, input_str: str, c: int, B: int) -> GraphEncoding:
    """The true encoding at a forced shape, extracted from a direct run.

    A run that halts early idles in place through the remaining blocks, so
    the extracted labels are padded with stay-put entries up to B.
    """
    trace = run_direct(machine, input_str, B * c)
    enc = trace_to_encoding(trace, c)
    if enc.B < B:
        m = [row + [0] * (B - enc.B) for row in enc.m]
        L = [row + [frozenset()] * (B - enc.B) for row in enc.L]
        enc = GraphEncoding(enc.p, B, c, m, L)
        enc.validate()
    return enc


def block_length_policy(policy: str):
    """Map a t guess to a block length c.

    "default" balances the two space terms at about sqrt(t lg t);
    "fixed:<c>" pins the block length for study runs.
    """
    if policy == "default":
        return lambda t: max(1, math.ceil(math.sqrt(t * math.log2(t))) if t > 1 else 1)
    if policy.startswith("fixed:"):
        c = int(policy.split(":", 1)[1])
        if c < 1:
            raise ValueError("block length must be positive")
        return lambda t: c
    raise ValueError(f"unknown block policy {policy!r}")


@dataclass
class SimulationResult:
    decision: str  # accept | reject | timeout
    decided: bool
    t_found: int | None
    c: int | None
    B: int | None
    horizon: int | None  # B*c simulated steps
    p: int
    content_bits: int | None
    fanin: int | None
    height: int | None
    encodings_tried: int
    guesses: int
    solver_used: str
    cm_mode: str
    oracle_guided: bool
    budget_hit: bool = False
    catalytic_bits: int | None = None
    local_bits_bound: int | None = None
    scratch_bits: int | None = None
    encoding_bits: int | None = None
    cm_total_bits: int | None = None
    naive_stack_bits: int | None = None

    def metrics(self) -> dict:
        return dict(self.__dict__)


def _space_fields(res: SimulationResult, p: int, B: int, width: int, cm_mode: str):
    meter = meter_closed_form(3 * p, width, B + 1, cm_mode)
    res.catalytic_bits = meter.catalytic_bits
    res.local_bits_bound = meter.local_bits_peak
    res.scratch_bits = meter.scratch_bits_peak
    res.encoding_bits = 3 * p * B
    res.cm_total_bits = meter.total_bits + res.encoding_bits
    res.naive_stack_bits = naive_bits_closed_form(3 * p, width, B + 1)


def simulate_space_efficient(
    machine: Machine,
    input_str: str,
    t_max: int = 4096,
    block_policy: str = "default",
    solver: str = "auto",
    t_growth: str = "linear",
    oracle_guided: bool = False,
    enum_budget: int = 10_000_000,
    cm_mode: str = "multilinear",
    backend: str = "auto",
) -> SimulationResult:
    """Decide the machine on input_str without ever storing a full run.

    Guesses the runtime t, derives the block length from the policy, and
    searches candidate movement encodings for one whose derivation tree
    certifies (non-FAIL root). The root value then holds the machine state
    at the horizon; a halt state yields the decision, otherwise the guess
    grows until t_max.

    solver "auto"/"naive" evaluates each candidate tree by memoized
    depth-first recursion over graph nodes. "cm" runs the catalytic solver
    on the padded tree; its budgets make it refuse all but toy layouts,
    and the refusal (a BudgetError) is deliberately left to the caller.
    """
    if solver not in ("auto", "naive", "cm"):
        raise ValueError(f"unknown solver {solver!r}")
    if t_growth not in ("linear", "doubling"):
        raise ValueError(f"unknown growth {t_growth!r}")
    policy = block_length_policy(block_policy)
    p = machine.p
    solver_used = "cm" if solver == "cm" else "naive-memo"

    result = SimulationResult(
        decision="timeout",
        decided=False,
        t_found=None,
        c=None,
        B=None,
        horizon=None,
        p=p,
        content_bits=None,
        fanin=None,
        height=None,
        encodings_tried=0,
        guesses=0,
        solver_used=solver_used,
        cm_mode=cm_mode,
        oracle_guided=oracle_guided,
    )

    seen_shapes = set()
    t = max(1, len(input_str))
    while t <= t_max:
        c = policy(t)
        B = -(-t // c)
        if (c, B) not in seen_shapes:
            seen_shapes.add((c, B))
            result.guesses += 1
            horizon = B * c
            if oracle_guided:
                candidates = [_oracle_encoding(machine, input_str, c, B)]
            else:
                candidates = enumerate_encodings(p, B, c, max_raw=enum_budget)
            try:
                for enc in candidates:
                    result.encodings_tried += 1
                    tree = ReductionTreeInstance(machine, input_str, enc)
                    if solver == "cm":
                        root_val = solve_cook_mertz(
                            pad_instance(tree), mode=cm_mode, backend=backend
                        ).value
                    else:
                        root_val = solve_naive(tree, memo=True).value
                    layout = tree.layout
                    if layout.failed(root_val):
                        continue
                    state = layout.state(root_val)
                    if not machine.is_halt(state):
                        # certified mid-run: any other certifying labeling
                        # would reproduce the same state, so move to the
                        # next shape rather than finish the sweep
                        break
                    result.decision = (
                        "accept" if state == machine.accept else "reject"
                    )
                    result.decided = True
                    result.t_found = t
                    result.c, result.B, result.horizon = c, B, horizon
                    result.content_bits = layout.width
                    result.fanin, result.height = tree.d, tree.h
                    _space_fields(result, p, B, layout.width, cm_mode)
                    return result
            except BudgetExceededError:
                # larger guesses only widen the label space; give up
                result.budget_hit = True
                return result
        t = t + 1 if t_growth == "linear" else t * 2
    return result


def sweep_row(
    machine: Machine,
    input_str: str,
    t: int,
    block_policy: str = "default",
    cm_mode: str = "multilinear",
    node_budget: int = 2_000_000,
) -> dict:
    """Space accounting at a forced horizon, for machines that need not halt.

    Runs the machine for exactly B*c steps (less if it halts), extracts the
    true encoding from the trace, then measures the plain depth-first
    evaluation of the derivation tree (no memoization: the honest stack)
    and the catalytic solver's closed-form requirement at the same shape.
    """
    policy = block_length_policy(block_policy)
    c = policy(t)
    B = -(-t // c)
    if (3 * machine.p) ** (B + 1) > node_budget:
        raise BudgetExceededError(
            f"a plain depth-first walk of up to {(3 * machine.p) ** (B + 1)} nodes "
            f"exceeds the budget of {node_budget}"
        )
    started = time.perf_counter()
    enc = _oracle_encoding(machine, input_str, c, B)
    tree = ReductionTreeInstance(machine, input_str, enc)
    naive = solve_naive(tree, memo=False)
    if tree.layout.failed(naive.value):
        raise AssertionError("the true encoding must certify")
    meter = meter_closed_form(tree.d, tree.b, tree.h, cm_mode)
    return {
        "machine": machine.name,
        "input_len": len(input_str),
        "t": t,
        "c": c,
        "B": B,
        "mode": cm_mode,
        "content_bits": tree.b,
        "catalytic_bits": meter.catalytic_bits,
        "local_bits_peak": meter.local_bits_peak,
        "scratch_bits_peak": meter.scratch_bits_peak,
        "encoding_bits": 3 * machine.p * B,
        "cm_total_bits": meter.total_bits + 3 * machine.p * B,
        "naive_space_bits": naive.space_bits_peak,
        "tree_nodes": naive.nodes_visited,
        "wall_time": time.perf_counter() - started,
    }
