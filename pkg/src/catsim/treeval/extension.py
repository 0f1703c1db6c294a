"""Low-degree extensions of node functions over GF(2^q).

A node function f maps d child values of b bits each to one b-bit value.
The catalytic solver never applies f directly to register contents; it
evaluates an extension of f, a polynomial over the field that agrees
with f on encoded inputs but is defined everywhere. Two encodings:

multilinear
    One field coordinate per value bit, so the extension lives on d*b
    coordinates. chi_a is the multilinear indicator of the bit pattern a
    and the extension is sum_a chi_a(x) * bit_j(f(a)), one polynomial per
    output bit, total degree at most d*b.

packed
    Each value is pack_len words of q/2 bits; words are identified with
    the field subset S of elements below 2^(q/2). chi_a is a product of
    Lagrange basis polynomials over S, one per coordinate, and the
    extension interpolates word j of f's output, per-coordinate degree
    |S| - 1. Domain points whose final word carries bits above position
    b - 1 decode by masking to b bits; any total rule would do, both
    implementations just have to share one.

Domain indices: a single int a indexes the evaluation domain, bit k for
multilinear coordinate k, base-|S| digit k (bits [k*w, (k+1)*w)) for
packed coordinate k. Coordinates are grouped child-major: child r owns
coordinates r*pack_len .. (r+1)*pack_len - 1 (pack_len = b when
multilinear).

Evaluation streams the whole domain and applies f once per point, so
its working set is one sweep's scratch, never a stored table.
"""

from __future__ import annotations

from .. import gf2
from .meter import CMParams


class BudgetError(RuntimeError):
    """Raised before starting work that would exceed a stated budget."""


DOMAIN_BUDGET = 1 << 24


def domain_size(params: CMParams) -> int:
    if params.mode == "multilinear":
        return 1 << (params.d * params.b)
    return 1 << ((params.q // 2) * params.d * params.pack_len)


def point_len(params: CMParams) -> int:
    return params.d * params.pack_len


def chi_eval(params: CMParams, a: int, point: list[int]) -> int:
    """Basis polynomial chi_a at point; 1 at domain point a, 0 elsewhere on the domain."""
    f = params.field
    n = point_len(params)
    if params.mode == "multilinear":
        out = 1
        for k in range(n):
            x = point[k]
            out = gf2.mul(f, out, x if (a >> k) & 1 else x ^ 1)
        return out
    w = params.q // 2
    size = 1 << w
    dinv = params.packset.denom_inv
    out = 1
    for k in range(n):
        alpha = (a >> (k * w)) & (size - 1)
        num = 1
        for s in range(size):
            if s != alpha:
                num = gf2.mul(f, num, point[k] ^ s)
        out = gf2.mul(f, out, gf2.mul(f, num, dinv[alpha]))
    return out


def extension_eval_all(
    inst, u, point: list[int], params: CMParams, budget: int = DOMAIN_BUDGET
) -> list[int]:
    """All pack_len output coordinates of node u's extension at point."""
    f = params.field
    d, b = params.d, params.b
    if inst.deg(u) != d:
        raise ValueError("extension needs fan-in exactly d; pad the instance first")
    if len(point) != point_len(params):
        raise ValueError("point has wrong arity")
    size = domain_size(params)
    if size > budget:
        raise BudgetError(
            f"extension domain of {size} points exceeds the budget of {budget}"
        )
    acc = [0] * params.pack_len

    if params.mode == "multilinear":
        vmask = (1 << b) - 1
        pairs = [(x ^ 1, x) for x in point]
        for a in range(size):
            chi = 1
            aa = a
            for k in range(d * b):
                chi = gf2.mul(f, chi, pairs[k][aa & 1])
                if chi == 0:
                    break
                aa >>= 1
            if chi == 0:
                continue
            out = inst.apply(u, [(a >> (r * b)) & vmask for r in range(d)])
            for j in range(b):
                if (out >> j) & 1:
                    acc[j] ^= chi
        return acc

    w = params.q // 2
    S = 1 << w
    t = params.pack_len
    dinv = params.packset.denom_inv
    n = d * t
    # chi factors via the full product over S: zero iff the coordinate is in S,
    # in which case the Lagrange basis degenerates to an equality test
    full = []
    for x in point:
        prod = 1
        for s in range(S):
            prod = gf2.mul(f, prod, x ^ s)
        full.append(prod)
    vmask = (1 << b) - 1
    wmask = S - 1
    for a in range(size):
        chi = 1
        for k in range(n):
            alpha = (a >> (k * w)) & wmask
            x = point[k]
            if x < S:
                if x != alpha:
                    chi = 0
                    break
            else:
                term = gf2.mul(f, full[k], gf2.inv(f, x ^ alpha))
                chi = gf2.mul(f, chi, gf2.mul(f, term, dinv[alpha]))
                if chi == 0:
                    break
        if chi == 0:
            continue
        vals = []
        for r in range(d):
            vbits = 0
            for jw in range(t):
                vbits |= ((a >> ((r * t + jw) * w)) & wmask) << (jw * w)
            vals.append(vbits & vmask)
        out = inst.apply(u, vals)
        for j in range(t):
            word = (out >> (j * w)) & wmask
            if word:
                acc[j] ^= gf2.mul(f, chi, word)
    return acc


def extension_eval(
    inst, u, j: int, point: list[int], params: CMParams, budget: int = DOMAIN_BUDGET
) -> int:
    """Single output coordinate j; spot-check form of extension_eval_all."""
    return extension_eval_all(inst, u, point, params, budget)[j]
