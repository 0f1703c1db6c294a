"""Space accounting and field-parameter selection for the catalytic solver.

The solver's storage splits into three pools that are metered separately:

  catalytic_bits     the register file of (d+1) value blocks, each holding
                     pack_len field elements of q bits. Borrowed: whatever
                     it held on entry is restored bit-for-bit on exit.
  local_bits_peak    the recursion stack: per level one loop counter over
                     the m root-of-unity steps (q bits), one child index
                     (ceil(lg d) bits), a fixed 8 bits of control state,
                     plus the current node address at ceil(lg d) bits per
                     level of the path.
  scratch_bits_peak  transient state of one interpolation sweep; freed
                     before the next recursive call, so it never stacks.

Field tables (exp/log for the chosen GF(2^q)) are shared machine constants,
not per-run storage, and are deliberately outside the meter; see README.

Two evaluation modes select the low-degree extension:

  multilinear  one field coordinate per value bit (pack_len = b), extension
               multilinear in d*b coordinates. q is the least even number
               with 2^q >= max(d*b*b, d*b + 2); the second bound keeps a
               primitive root with enough distinct powers, the first keeps
               the sweep's degree argument honest (total degree d*b must
               stay below m = 2^q - 1 with room for the b-fold products).
  packed       value bits are packed q/2 to a field element (pack_len =
               ceil(2b/q)) and the extension interpolates each coordinate
               over the subset S of the 2^(q/2) low-word elements. With
               d2, b2 the next powers of two of d and b, q is fixed by
               2^q = (d2*b2)^2, which is even by construction and makes
               |S| = d2*b2. Coordinate degree |S| - 1 times d children
               times pack_len coordinates stays below m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import gf2


def _ceil_lg(n: int) -> int:
    """ceil(log2 n); 0 for n == 1."""
    return (n - 1).bit_length() if n >= 2 else 0


def derive_dims(d: int, b: int, mode: str) -> tuple[int, int]:
    """Field width q and elements-per-value pack_len, without building tables."""
    if d < 2 or b < 1:
        raise ValueError("need d >= 2 and b >= 1")
    if mode == "multilinear":
        need = max(d * b * b, d * b + 2)
        q = max(2, _ceil_lg(need))
        if q % 2:
            q += 1
        return q, b
    if mode == "packed":
        q = 2 * (_ceil_lg(d) + _ceil_lg(b))
        w = q // 2
        pack_len = -(-b // w)
        # total degree of the packed extension must stay below m = 2^q - 1
        assert d * ((1 << w) - 1) * pack_len < (1 << q) - 1
        return q, pack_len
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class CMParams:
    """Everything the catalytic solver needs about the field and packing."""

    mode: str
    d: int
    b: int
    q: int
    pack_len: int
    field: gf2.FieldParams
    packset: gf2.PackSet | None  # packed mode only

    @property
    def m(self) -> int:
        return self.field.m


def make_params(d: int, b: int, mode: str) -> CMParams:
    q, pack_len = derive_dims(d, b, mode)
    if q > 32:
        raise ValueError(f"required field GF(2^{q}) exceeds the q <= 32 build limit")
    field = gf2.field_new(q)
    packset = gf2.pack_set(field) if mode == "packed" else None
    return CMParams(mode, d, b, q, pack_len, field, packset)


def scratch_bits(d: int, b: int, q: int, pack_len: int, mode: str) -> int:
    """Working set of one streamed interpolation sweep.

    multilinear: a gathered copy of the d*b-coordinate point, the pack_len
    (= b) accumulator elements, the d*b-bit domain counter, and the running
    chi product.

    packed: the gathered point and a same-size cache of per-coordinate full
    products for the Lagrange stream (2 * d*pack_len elements), the
    accumulator, the domain counter as d*pack_len digits of q/2 bits, and
    the running chi product.
    """
    if mode == "multilinear":
        return d * b * q + b * q + d * b + q
    return 2 * d * pack_len * q + pack_len * q + d * pack_len * (q // 2) + q


@dataclass(frozen=True)
class SpaceMeter:
    catalytic_bits: int
    local_bits_peak: int
    scratch_bits_peak: int

    @property
    def total_bits(self) -> int:
        return self.catalytic_bits + self.local_bits_peak + self.scratch_bits_peak


def build_meter(params: CMParams, depth_peak: int, swept: bool) -> SpaceMeter:
    """Meter for a finished run that reached depth_peak stack levels."""
    d, q = params.d, params.q
    frame = q + _ceil_lg(d) + 8
    addr = _ceil_lg(d)
    return SpaceMeter(
        catalytic_bits=(d + 1) * params.pack_len * q,
        local_bits_peak=depth_peak * (frame + addr),
        scratch_bits_peak=scratch_bits(d, params.b, q, params.pack_len, params.mode)
        if swept
        else 0,
    )


def meter_closed_form(d: int, b: int, h: int, mode: str) -> SpaceMeter:
    """Worst-case meter for any height-h instance, from parameters alone."""
    q, pack_len = derive_dims(d, b, mode)
    frame = q + _ceil_lg(d) + 8
    addr = _ceil_lg(d)
    return SpaceMeter(
        catalytic_bits=(d + 1) * pack_len * q,
        local_bits_peak=h * (frame + addr),
        scratch_bits_peak=scratch_bits(d, b, q, pack_len, mode) if h > 1 else 0,
    )


def naive_bits_closed_form(d: int, b: int, h: int) -> int:
    """Worst-case stack of the plain depth-first evaluator at the same shape."""
    return h * (d * b + _ceil_lg(d) + 8) + h * _ceil_lg(d)
