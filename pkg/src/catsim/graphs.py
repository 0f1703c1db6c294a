"""Succinct computation graphs over tape blocks.

A run of p tapes split into B time blocks is summarized by, per tape h and
time block i, a movement label m in {-1,0,+1} (difference between the head's
block at the end and at the start of the time block) and an extra-active-block
label L, a subset of {-1,+1} with at most one element (offset of the one
adjacent block the head also touched). The labels determine everything the
reduction needs: starting blocks via prefix sums, active-block sets, and the
provider structure ("who wrote this block last").

Nodes are plain tuples: (h, i) is tape h after time block i; (h, 0, v) is the
source holding the initial contents of block v of tape h. Sources have length
3, inner nodes length 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .machine import RunTrace, annotate_blocks

# 3-bit wire codes for one (movement, extra-blocks) label pair
_CODE_OF = {
    (0, frozenset()): 0,
    (+1, frozenset({+1})): 1,
    (-1, frozenset({-1})): 2,
    (0, frozenset({+1})): 3,
    (0, frozenset({-1})): 4,
}
_LABEL_OF = {v: k for k, v in _CODE_OF.items()}


class EncodingError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


@dataclass
class GraphEncoding:
    """Candidate movement labels for a (p, B, c) run; may be wrong on purpose."""

    p: int
    B: int
    c: int
    m: list[list[int]]  # m[h-1][i-1] in {-1, 0, +1}
    L: list[list[frozenset[int]]]  # subset of {-1,+1}, at most one element

    def label(self, h: int, i: int) -> tuple[int, frozenset[int]]:
        return self.m[h - 1][i - 1], self.L[h - 1][i - 1]

    def validate(self):
        if len(self.m) != self.p or len(self.L) != self.p:
            raise EncodingError("label arrays must have one row per tape")
        for h in range(1, self.p + 1):
            if len(self.m[h - 1]) != self.B or len(self.L[h - 1]) != self.B:
                raise EncodingError("label rows must have one entry per time block")
            for i in range(1, self.B + 1):
                mv, ex = self.label(h, i)
                if mv not in (-1, 0, +1) or not ex <= {-1, +1} or len(ex) > 1:
                    raise EncodingError(f"bad label at ({h},{i})")
                # the ending block is always active
                if mv != 0 and ex != frozenset({mv}):
                    raise EncodingError(f"movement {mv} needs L={{{mv}}} at ({h},{i})")
            # blocks are indexed from 1; no derived index may fall below that
            for i in range(1, self.B + 2):
                if block_index(self, h, i) < 1:
                    raise EncodingError(f"head of tape {h} leaves the tape before block {i}")
            for i in range(1, self.B + 1):
                if min(active_blocks(self, h, i)) < 1:
                    raise EncodingError(f"active block below 1 at ({h},{i})")


def block_index(enc: GraphEncoding, h: int, i: int) -> int:
    """Starting block of tape h in time block i (prefix sum of movements)."""
    return 1 + sum(enc.m[h - 1][: i - 1])


def active_blocks(enc: GraphEncoding, h: int, i: int) -> list[int]:
    """Blocks declared touched in time block i; starting block first."""
    s = block_index(enc, h, i)
    return [s] + [s + o for o in sorted(enc.L[h - 1][i - 1])]


def is_source(node) -> bool:
    return len(node) == 3


def edge(enc: GraphEncoding, u, v) -> bool:
    """Does node u feed time block j = v[1]?

    Inner-to-inner: consecutive blocks always connect; otherwise some block
    active at both ends must have been untouched strictly in between.
    Source-to-inner: the source's block is touched at j for the first time.
    """
    if is_source(v) or not 1 <= v[1] <= enc.B:
        return False
    j = v[1]
    if is_source(u):
        h, _, w = u
        if w not in active_blocks(enc, h, j):
            return False
        return all(w not in active_blocks(enc, h, k) for k in range(1, j))
    h, i = u
    if not 1 <= i < j:
        return False
    if j == i + 1:
        return True
    both = set(active_blocks(enc, h, i)) & set(active_blocks(enc, h, j))
    for w in both:
        if all(w not in active_blocks(enc, h, k) for k in range(i + 1, j)):
            return True
    return False


def predecessors(enc: GraphEncoding, h: int, i: int) -> list:
    """Input slots of node (h, i), in fixed order.

    For each tape: one content slot per declared active block (the most
    recent node whose active set contained it, or the block's source on
    first touch). Then for each tape a state slot: the previous time block,
    or the tape's block-1 source when i = 1. Duplicates are retained; the
    slot count is between 2p and 3p.
    """
    slots = []
    for hp in range(1, enc.p + 1):
        for v in active_blocks(enc, hp, i):
            prev = None
            for k in range(i - 1, 0, -1):
                if v in active_blocks(enc, hp, k):
                    prev = k
                    break
            slots.append((hp, prev) if prev is not None else (hp, 0, v))
    for hp in range(1, enc.p + 1):
        slots.append((hp, i - 1) if i > 1 else (hp, 0, 1))
    return slots


# ---- extraction from a real run ----


def trace_to_encoding(trace: RunTrace, c: int) -> GraphEncoding:
    ann = annotate_blocks(trace, c)
    m = []
    L = []
    for h in range(trace.p):
        mrow = []
        lrow = []
        for i in range(ann.B):
            start = ann.headlog[h][i]
            mrow.append(ann.headlog[h][i + 1] - start)
            lrow.append(frozenset(b - start for b in ann.activelog[h][i] if b != start))
        m.append(mrow)
        L.append(lrow)
    enc = GraphEncoding(trace.p, ann.B, c, m, L)
    enc.validate()
    return enc


# ---- enumeration ----


def enumerate_encodings(p: int, B: int, c: int, max_raw: int = 10_000_000):
    """Yield every valid encoding, lexicographic in serialized code order.

    The raw label space has 5^(p*B) points; anything past max_raw is
    refused up front rather than silently truncated.
    """
    pairs = p * B
    if 5 ** pairs > max_raw:
        raise BudgetExceededError(
            f"5^{pairs} candidate labelings exceed the enumeration budget {max_raw}"
        )
    for codes in product(range(5), repeat=pairs):
        enc = _from_codes(p, B, c, codes)
        try:
            enc.validate()
        except EncodingError:
            continue
        yield enc


def _from_codes(p, B, c, codes) -> GraphEncoding:
    m = [[0] * B for _ in range(p)]
    L = [[frozenset()] * B for _ in range(p)]
    k = 0
    for i in range(B):
        for h in range(p):
            mv, ex = _LABEL_OF[codes[k]]
            m[h][i] = mv
            L[h][i] = ex
            k += 1
    return GraphEncoding(p, B, c, m, L)


# ---- serialization: 3 bits per (h, i), i-major then h, little-endian ----


def encoding_to_bytes(enc: GraphEncoding) -> bytes:
    acc = 0
    k = 0
    for i in range(1, enc.B + 1):
        for h in range(1, enc.p + 1):
            code = _CODE_OF[enc.label(h, i)]
            acc |= code << (3 * k)
            k += 1
    return acc.to_bytes(-(-3 * k // 8) or 1, "little")


def encoding_from_bytes(data: bytes, p: int, B: int, c: int) -> GraphEncoding:
    acc = int.from_bytes(data, "little")
    codes = []
    for k in range(p * B):
        code = (acc >> (3 * k)) & 0b111
        if code not in _LABEL_OF:
            raise EncodingError(f"invalid wire code {code}")
        codes.append(code)
    if acc >> (3 * p * B):
        raise EncodingError("trailing bits in serialized encoding")
    enc = _from_codes(p, B, c, tuple(codes))
    enc.validate()
    return enc
