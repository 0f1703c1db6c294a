"""Binary extension fields GF(2^q) with integer-encoded elements.

An element is an int whose bits are the coefficients of a polynomial over
GF(2), reduced modulo a fixed irreducible polynomial: bit k is the
coefficient of x^k. Addition is XOR; multiplication is shift-and-xor
reduction. For q <= _TABLE_LIMIT a discrete-log table pair accelerates
multiplication; semantics are identical either way.

The field order is always 2^q with q even, so the multiplicative group has
the odd order m = 2^q - 1 used as the interpolation orbit length, and the
subset S of elements whose upper q/2 bits are zero serves as the node set
for packed low-degree interpolation (word <-> element is the identity on
the low q/2 bits).
"""

from __future__ import annotations

_TABLE_LIMIT = 16


class CorruptionError(ValueError):
    """A register held a bit pattern outside the expected decode set."""


def _mul_nomod(a: int, b: int) -> int:
    # carry-less product of two GF(2) polynomials
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _mod(a: int, modulus: int) -> int:
    md = modulus.bit_length()
    while a.bit_length() >= md:
        a ^= modulus << (a.bit_length() - md)
    return a


def mul_slow(a: int, b: int, modulus: int) -> int:
    """Table-free field multiplication; the oracle path for any q."""
    return _mod(_mul_nomod(a, b), modulus)


def _is_irreducible(poly: int) -> bool:
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    # trial division by every polynomial of degree 1..deg//2
    for d in range(1, deg // 2 + 1):
        for low in range(1 << d):
            divisor = (1 << d) | low
            if _mod(poly, divisor) == 0:
                return False
    return True


def least_irreducible(q: int) -> int:
    """Lexicographically least irreducible polynomial of degree q."""
    for low in range(1 << q):
        cand = (1 << q) | low
        if _is_irreducible(cand):
            return cand
    raise AssertionError("irreducible polynomial of every degree exists")


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldParams:
    """Immutable description of one GF(2^q) instance.

    q: extension degree, even, 2 <= q <= 32
    modulus: least irreducible polynomial of degree q
    m: multiplicative group order 2^q - 1
    omega: least element (by integer value) of order exactly m
    """

    __slots__ = ("q", "modulus", "m", "omega", "_exp", "_log")

    def __init__(self, q: int):
        if q % 2 != 0 or not (2 <= q <= 32):
            raise ValueError(f"q must be even in [2, 32], got {q}")
        self.q = q
        self.modulus = least_irreducible(q)
        self.m = (1 << q) - 1
        self.omega = self._find_generator()
        if q <= _TABLE_LIMIT:
            self._build_tables()
        else:
            self._exp = None
            self._log = None

    def _order_is_full(self, a: int, factors: list[int]) -> bool:
        return all(
            self.pow_slow(a, self.m // p) != 1 for p in factors
        )

    def _find_generator(self) -> int:
        factors = _prime_factors(self.m)
        for a in range(2, 1 << self.q):
            if self._order_is_full(a, factors):
                return a
        raise AssertionError("GF(2^q)* is cyclic")

    def pow_slow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = mul_slow(r, a, self.modulus)
            a = mul_slow(a, a, self.modulus)
            k >>= 1
        return r

    def _build_tables(self):
        m = self.m
        exp = [0] * (2 * m)  # doubled so exp[i+j] never needs a reduction
        log = [0] * (m + 1)
        acc = 1
        for i in range(m):
            exp[i] = acc
            exp[i + m] = acc
            log[acc] = i
            acc = mul_slow(acc, self.omega, self.modulus)
        assert acc == 1, "omega order must be exactly m"
        self._exp = exp
        self._log = log

    def __repr__(self):
        return f"FieldParams(q={self.q}, modulus={bin(self.modulus)}, omega={bin(self.omega)})"


def field_new(q: int) -> FieldParams:
    return FieldParams(q)


def add(a: int, b: int) -> int:
    """Field addition; characteristic two, so addition == subtraction."""
    return a ^ b


def mul(params: FieldParams, a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    if params._exp is not None:
        return params._exp[params._log[a] + params._log[b]]
    return mul_slow(a, b, params.modulus)


def pow_(params: FieldParams, a: int, k: int) -> int:
    if k < 0:
        raise ValueError("negative exponent; use inv")
    if a == 0:
        return 0 if k else 1
    if params._exp is not None:
        return params._exp[(params._log[a] * k) % params.m]
    return params.pow_slow(a, k % params.m) if k else 1


def inv(params: FieldParams, a: int) -> int:
    """Multiplicative inverse: one table lookup, else a^(2^q - 2)."""
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    if params._exp is not None:
        return params._exp[params.m - params._log[a]]
    return pow_(params, a, (1 << params.q) - 2)


def omega_pow(params: FieldParams, i: int) -> int:
    """omega^i, the orbit element for iteration i (any integer i)."""
    if params._exp is not None:
        return params._exp[i % params.m]
    return params.pow_slow(params.omega, i % params.m)


# ---- packed word set ----


class PackSet:
    """The 2^(q/2) field elements whose upper bits are zero.

    These are the interpolation nodes of the packed mode; the map between
    (q/2)-bit words and elements is the identity, so pack/unpack is pure
    bit slicing. Lagrange denominators over the set are precomputed here.
    """

    __slots__ = ("word_bits", "size", "denom_inv")

    def __init__(self, params: FieldParams):
        self.word_bits = params.q // 2
        self.size = 1 << self.word_bits
        denom_inv = []
        for alpha in range(self.size):
            d = 1
            for s in range(self.size):
                if s != alpha:
                    d = mul(params, d, alpha ^ s)
            denom_inv.append(inv(params, d))
        self.denom_inv = tuple(denom_inv)


def pack_set(params: FieldParams) -> PackSet:
    return PackSet(params)


def pack(params: FieldParams, bits: int, b: int) -> list[int]:
    """Split a b-bit value into ceil(b / (q/2)) field elements of S.

    Bit k of `bits` is bit (k mod w) of word k // w, w = q/2; the final
    word is zero-padded.
    """
    if bits < 0 or bits >> b:
        raise ValueError(f"value does not fit in {b} bits")
    w = params.q // 2
    mask = (1 << w) - 1
    n = -(-b // w)
    return [(bits >> (j * w)) & mask for j in range(n)]


def unpack(params: FieldParams, words: list[int], b: int) -> int:
    """Inverse of pack; rejects elements outside S or stray pad bits."""
    w = params.q // 2
    bits = 0
    for j, word in enumerate(words):
        if word >> w:
            raise CorruptionError(f"element {word:#x} outside the pack set")
        bits |= word << (j * w)
    if bits >> b:
        raise CorruptionError("nonzero padding above the value width")
    return bits
