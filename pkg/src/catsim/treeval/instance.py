"""Tree-evaluation instances.

An instance is a rooted tree of fan-in at most d whose leaves hold b-bit
values and whose inner nodes compute a b-bit value from the concatenation
of their children's values. Instances may be implicit: the interface below
never asks for the whole tree at once, only for one node's neighborhood,
so a tree can be defined by computation rather than storage.

Bit convention used everywhere: a "b-bit value" is an int whose bit k
(value >> k & 1) is position k of the string; the text form writes position
0 first. Child 1 of an inner node occupies the low b bits of the function
input index, child 2 the next b, and so on.
"""

from __future__ import annotations


class MalformedInstanceError(ValueError):
    pass


class TreeInstance:
    """Interface. d: max fan-in (>= 2); b: value width; h: height bound."""

    d: int
    b: int
    h: int

    def root(self):
        raise NotImplementedError

    def is_leaf(self, u) -> bool:
        raise NotImplementedError

    def children(self, u) -> list:
        raise NotImplementedError

    def leaf_value(self, u) -> int:
        raise NotImplementedError

    def apply(self, u, inputs: list[int]) -> int:
        raise NotImplementedError

    def deg(self, u) -> int:
        return len(self.children(u))

    def node_key(self, u):
        """Hashable identity of the subtree below u, for memoized solvers.

        Distinct addresses may share a key when their subtrees are
        guaranteed to evaluate to the same value.
        """
        return u


class ExplicitTreeInstance(TreeInstance):
    """A fully stored tree with table-backed node functions."""

    def __init__(self, d, b, h, root, leaves, inner):
        """leaves: {addr: value}; inner: {addr: (children tuple, table list)}."""
        self.d = d
        self.b = b
        self.h = h
        self._root = root
        self._leaves = leaves
        self._inner = inner
        self._validate()

    def _validate(self):
        if self.d < 2 or self.b < 1 or self.h < 1:
            raise MalformedInstanceError("need d >= 2, b >= 1, h >= 1")
        if self._leaves.keys() & self._inner.keys():
            raise MalformedInstanceError("address is both leaf and inner")
        for addr, v in self._leaves.items():
            if not 0 <= v < (1 << self.b):
                raise MalformedInstanceError(f"leaf {addr!r} value out of range")
        for addr, (kids, table) in self._inner.items():
            if not 2 <= len(kids) <= self.d:
                raise MalformedInstanceError(f"node {addr!r} fan-in {len(kids)} outside [2, d]")
            if len(table) != 1 << (len(kids) * self.b):
                raise MalformedInstanceError(f"node {addr!r} table has wrong size")
            for kid in kids:
                if kid not in self._leaves and kid not in self._inner:
                    raise MalformedInstanceError(f"node {addr!r} child {kid!r} missing")
        if self._root not in self._leaves and self._root not in self._inner:
            raise MalformedInstanceError("missing root")
        # reachability walk doubles as a cycle and height check
        seen = set()

        def walk(u, depth):
            if depth > self.h:
                raise MalformedInstanceError("height exceeded (cycle or bad header)")
            seen.add(u)
            if u in self._inner:
                for kid in self._inner[u][0]:
                    walk(kid, depth + 1)

        walk(self._root, 1)
        unreachable = (self._leaves.keys() | self._inner.keys()) - seen
        if unreachable:
            raise MalformedInstanceError(f"unreachable nodes: {sorted(unreachable)[:3]}")

    def root(self):
        return self._root

    def is_leaf(self, u):
        return u in self._leaves

    def children(self, u):
        return list(self._inner[u][0])

    def leaf_value(self, u):
        return self._leaves[u]

    def table(self, u):
        return self._inner[u][1]

    def apply(self, u, inputs):
        kids, table = self._inner[u]
        idx = 0
        for pos, v in enumerate(inputs):
            idx |= v << (pos * self.b)
        return table[idx]


_PAD = "__pad__"


class PaddedTreeInstance(TreeInstance):
    """Wraps an instance so every inner node has fan-in exactly d.

    Synthetic children are zero leaves and the node functions ignore them,
    so values are unchanged; only the evaluation domain is widened.
    """

    def __init__(self, base: TreeInstance):
        self.base = base
        self.d = base.d
        self.b = base.b
        self.h = base.h

    def root(self):
        return self.base.root()

    def is_leaf(self, u):
        if isinstance(u, tuple) and len(u) == 3 and u[0] is _PAD:
            return True
        return self.base.is_leaf(u)

    def children(self, u):
        kids = self.base.children(u)
        return kids + [(_PAD, u, k) for k in range(len(kids), self.d)]

    def leaf_value(self, u):
        if isinstance(u, tuple) and len(u) == 3 and u[0] is _PAD:
            return 0
        return self.base.leaf_value(u)

    def apply(self, u, inputs):
        return self.base.apply(u, inputs[: self.base.deg(u)])

    def deg(self, u):
        return self.d

    def node_key(self, u):
        if isinstance(u, tuple) and len(u) == 3 and u[0] is _PAD:
            return u
        return self.base.node_key(u)


def pad_instance(inst: TreeInstance) -> PaddedTreeInstance:
    return PaddedTreeInstance(inst)


# ---- text format ----
#
#   # comment
#   2 4 3                     <- header: d b h
#   node root inner kid1 kid2 table 0000 0001 ... (2^(deg*b) rows of b chars)
#   node kid1 leaf 0110
#
# The first node line is the root. Tables are only representable while
# deg*b <= 16; bit strings are written position 0 first.


def _bits_to_int(s: str, b: int, what: str) -> int:
    if len(s) != b or set(s) - {"0", "1"}:
        raise MalformedInstanceError(f"{what}: expected {b} bits, got {s!r}")
    return int(s[::-1], 2)


def int_to_bits(v: int, b: int) -> str:
    return format(v, f"0{b}b")[::-1]


def parse_instance(text: str) -> ExplicitTreeInstance:
    tokens = []
    for raw in text.splitlines():
        tokens += raw.split("#", 1)[0].split()
    if len(tokens) < 3:
        raise MalformedInstanceError("missing header")
    try:
        d, b, h = (int(t) for t in tokens[:3])
    except ValueError:
        raise MalformedInstanceError("header must be three integers: d b h") from None
    pos = 3
    root = None
    leaves = {}
    inner = {}

    def take(what):
        nonlocal pos
        if pos >= len(tokens):
            raise MalformedInstanceError(f"unexpected end of file, wanted {what}")
        pos += 1
        return tokens[pos - 1]

    while pos < len(tokens):
        if take("'node'") != "node":
            raise MalformedInstanceError("expected 'node'")
        addr = take("address")
        if addr in leaves or addr in inner:
            raise MalformedInstanceError(f"duplicate node {addr!r}")
        kind = take("'leaf' or 'inner'")
        if kind == "leaf":
            leaves[addr] = _bits_to_int(take("leaf bits"), b, f"leaf {addr!r}")
        elif kind == "inner":
            kids = []
            while True:
                t = take("child or 'table'")
                if t == "table":
                    break
                kids.append(t)
            if len(kids) * b > 16:
                raise MalformedInstanceError(
                    f"node {addr!r}: tables only allowed while deg*b <= 16"
                )
            table = [
                _bits_to_int(take("table row"), b, f"table of {addr!r}")
                for _ in range(1 << (len(kids) * b))
            ]
            inner[addr] = (tuple(kids), table)
        else:
            raise MalformedInstanceError(f"unknown node kind {kind!r}")
        if root is None:
            root = addr
    return ExplicitTreeInstance(d, b, h, root, leaves, inner)


def parse_instance_file(path) -> ExplicitTreeInstance:
    from pathlib import Path

    return parse_instance(Path(path).read_text())


def format_instance(inst: ExplicitTreeInstance) -> str:
    lines = [f"{inst.d} {inst.b} {inst.h}"]
    order = []

    def walk(u):
        if u in order:
            return
        order.append(u)
        if not inst.is_leaf(u):
            for kid in inst.children(u):
                walk(kid)

    walk(inst.root())
    for u in order:
        if inst.is_leaf(u):
            lines.append(f"node {u} leaf {int_to_bits(inst.leaf_value(u), inst.b)}")
        else:
            kids = " ".join(inst.children(u))
            rows = " ".join(int_to_bits(r, inst.b) for r in inst.table(u))
            lines.append(f"node {u} inner {kids} table {rows}")
    return "\n".join(lines) + "\n"
