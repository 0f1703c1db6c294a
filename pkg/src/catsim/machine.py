"""Multitape Turing machines: parsing, direct simulation, block annotation.

Machines run on p one-way-infinite tapes with a single head each. The input
is written on tape 1 from cell 0, blank-terminated; all heads start at cell
0 and moving left from cell 0 leaves the head in place. Accept and reject
states are absorbing, so a halted machine can be "run" past its halting step
without changing anything; block-level bookkeeping relies on that padding.

The machine description format (one machine per file):

    tapes 2
    alphabet _ 0 1        # single-character symbols, '_' is the blank
    states s t acc rej
    start s
    accept acc
    reject rej
    s 0 1 -> t 1 0 R S    # state, p reads, '->', state, p writes, p moves

Transition tables must be total over non-halt states; rows for halt states
may be omitted (they are filled in as absorbing self-loops) but if present
must be absorbing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MOVES = {"L": -1, "S": 0, "R": +1}
MOVE_NAMES = {v: k for k, v in MOVES.items()}


class MachineFormatError(ValueError):
    """Raised on malformed machine descriptions, with a line number."""


@dataclass
class Machine:
    name: str
    p: int
    alphabet: tuple[str, ...]
    blank: int
    states: tuple[str, ...]
    start: int
    accept: int
    reject: int
    # (state, read symbols) -> (state', writes, moves)
    delta: dict[tuple[int, tuple[int, ...]], tuple[int, tuple[int, ...], tuple[int, ...]]]

    def symbol_index(self, ch: str) -> int:
        try:
            return self.alphabet.index(ch)
        except ValueError:
            raise ValueError(f"symbol {ch!r} not in alphabet") from None

    def is_halt(self, state: int) -> bool:
        return state in (self.accept, self.reject)


@dataclass
class Configuration:
    """A full machine snapshot; tapes are sparse {cell: symbol index} maps."""

    state: int
    tapes: list[dict[int, int]]
    heads: list[int]

    def read(self, machine: Machine) -> tuple[int, ...]:
        return tuple(
            self.tapes[h].get(self.heads[h], machine.blank) for h in range(machine.p)
        )

    def step(self, machine: Machine) -> None:
        key = (self.state, self.read(machine))
        self.state, writes, moves = machine.delta[key]
        for h in range(machine.p):
            self.tapes[h][self.heads[h]] = writes[h]
            # one-way tape: a left move at cell 0 stays put
            self.heads[h] = max(0, self.heads[h] + moves[h])


@dataclass
class RunTrace:
    decision: str  # accept | reject | timeout
    steps: int
    halted: bool
    p: int
    # head_paths[h][s] = position of head h after s steps; length steps+1
    head_paths: list[list[int]] = field(repr=False)


def initial_configuration(machine: Machine, input_str: str) -> Configuration:
    tape1 = {}
    for i, ch in enumerate(input_str):
        sym = machine.symbol_index(ch)
        if sym == machine.blank:
            raise ValueError("input may not contain the blank symbol")
        tape1[i] = sym
    tapes = [tape1] + [{} for _ in range(machine.p - 1)]
    return Configuration(machine.start, tapes, [0] * machine.p)


def run_direct(machine: Machine, input_str: str, max_steps: int) -> RunTrace:
    """Simulate until a halt state or max_steps; records every head position."""
    cfg = initial_configuration(machine, input_str)
    paths = [[0] for _ in range(machine.p)]
    steps = 0
    while not machine.is_halt(cfg.state) and steps < max_steps:
        cfg.step(machine)
        steps += 1
        for h in range(machine.p):
            paths[h].append(cfg.heads[h])
    halted = machine.is_halt(cfg.state)
    decision = (
        "accept" if cfg.state == machine.accept
        else "reject" if cfg.state == machine.reject
        else "timeout"
    )
    return RunTrace(decision, steps, halted, machine.p, paths)


# ---- block annotation ----


def block_of(pos: int, c: int) -> int:
    """Tape blocks have length c and are indexed from 1."""
    return pos // c + 1


@dataclass
class BlockAnnotation:
    c: int
    B: int
    # headlog[h][i] = block of head h at the start of time block i+1, i = 0..B
    headlog: list[list[int]]
    # activelog[h][i] = blocks touched during time block i+1 (end position included)
    activelog: list[list[set[int]]]


def annotate_blocks(trace: RunTrace, c: int) -> BlockAnnotation:
    """Derive per-time-block head logs from a recorded run.

    The run length is padded up to a multiple of c. For halted runs the halt
    state idles in place, so padding repeats the final position; an unfinished
    run can only be annotated if it already ends on a block boundary.
    """
    if c < 1:
        raise ValueError("block length must be >= 1")
    B = -(-trace.steps // c)
    total = B * c
    if not trace.halted and trace.steps < total:
        raise ValueError("timeout trace does not fill its final time block")
    headlog = []
    activelog = []
    for h in range(trace.p):
        path = trace.head_paths[h]
        path = path + [path[-1]] * (total - len(path) + 1)
        headlog.append([block_of(path[i * c], c) for i in range(B + 1)])
        activelog.append(
            [
                {block_of(q, c) for q in path[i * c : (i + 1) * c + 1]}
                for i in range(B)
            ]
        )
    return BlockAnnotation(c, B, headlog, activelog)


# ---- parsing ----


def parse_machine(text: str, name: str = "machine") -> Machine:
    header: dict[str, list[str]] = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] in ("tapes", "alphabet", "states", "start", "accept", "reject") \
                and tokens[0] not in header:
            header[tokens[0]] = tokens[1:]
        else:
            rows.append((lineno, tokens))

    def need(key, count=None):
        if key not in header:
            raise MachineFormatError(f"missing '{key}' line")
        if count is not None and len(header[key]) != count:
            raise MachineFormatError(f"'{key}' expects {count} value(s)")
        return header[key]

    try:
        p = int(need("tapes", 1)[0])
    except ValueError:
        raise MachineFormatError("'tapes' expects an integer") from None
    if p < 1:
        raise MachineFormatError("need at least one tape")

    alphabet = tuple(need("alphabet"))
    if any(len(s) != 1 for s in alphabet):
        raise MachineFormatError("symbols must be single characters")
    if len(set(alphabet)) != len(alphabet):
        raise MachineFormatError("duplicate symbol in alphabet")
    if "_" not in alphabet:
        raise MachineFormatError("alphabet must contain the blank '_'")
    blank = alphabet.index("_")

    states = tuple(need("states"))
    if len(set(states)) != len(states):
        raise MachineFormatError("duplicate state name")
    sidx = {s: i for i, s in enumerate(states)}

    def state_of(tok, what):
        if tok not in sidx:
            raise MachineFormatError(f"{what} state {tok!r} not declared")
        return sidx[tok]

    start = state_of(need("start", 1)[0], "start")
    accept = state_of(need("accept", 1)[0], "accept")
    reject = state_of(need("reject", 1)[0], "reject")
    if accept == reject:
        raise MachineFormatError("accept and reject must differ")

    aidx = {a: i for i, a in enumerate(alphabet)}
    delta = {}
    for lineno, tokens in rows:
        if "->" not in tokens:
            raise MachineFormatError(f"line {lineno}: expected a transition row")
        arrow = tokens.index("->")
        lhs, rhs = tokens[:arrow], tokens[arrow + 1 :]
        if len(lhs) != 1 + p or len(rhs) != 1 + 2 * p:
            raise MachineFormatError(f"line {lineno}: row shape must be state {p} reads -> state {p} writes {p} moves")
        src = state_of(lhs[0], f"line {lineno}: source")
        try:
            reads = tuple(aidx[t] for t in lhs[1:])
            writes = tuple(aidx[t] for t in rhs[1 : 1 + p])
        except KeyError as e:
            raise MachineFormatError(f"line {lineno}: unknown symbol {e.args[0]!r}") from None
        dst = state_of(rhs[0], f"line {lineno}: target")
        try:
            moves = tuple(MOVES[t] for t in rhs[1 + p :])
        except KeyError as e:
            raise MachineFormatError(f"line {lineno}: move must be L, S or R, got {e.args[0]!r}") from None
        key = (src, reads)
        if key in delta:
            raise MachineFormatError(f"line {lineno}: duplicate transition row")
        if src in (accept, reject):
            if dst != src or writes != reads or any(moves):
                raise MachineFormatError(f"line {lineno}: non-absorbing halt state")
        delta[key] = (dst, writes, moves)

    # fill halt-state self-loops, then check totality over non-halt states
    from itertools import product

    for syms in product(range(len(alphabet)), repeat=p):
        for halt in (accept, reject):
            delta.setdefault((halt, syms), (halt, syms, (0,) * p))
    for s in range(len(states)):
        if s in (accept, reject):
            continue
        for syms in product(range(len(alphabet)), repeat=p):
            if (s, syms) not in delta:
                missing = " ".join(alphabet[a] for a in syms)
                raise MachineFormatError(
                    f"undefined transition: state {states[s]!r} reading '{missing}'"
                )

    return Machine(name, p, alphabet, blank, states, start, accept, reject, delta)


def parse_machine_file(path) -> Machine:
    from pathlib import Path

    path = Path(path)
    return parse_machine(path.read_text(), name=path.stem)
