"""Ranks of prefix products of a chain of cyclotomic matrices.

Given blocks X_1, ..., X_m (shapes chained) we need rank(X_1 X_2 ... X_k) for
every k. Two independent routes:

* :func:`exact_chain_ranks` runs exact elimination over Q(z_n), carrying only
  a row-space basis from one prefix to the next.
* :func:`certified_chain_ranks` reduces everything modulo prime ideals
  (p, z - w) with p = 1 mod n and w a primitive n-th root of unity mod p.
  Each modular rank is a lower bound.  Once the primes seen so far have a
  product larger than a Hadamard-type bound on every (r+1)-minor of the
  integerised product, a nonzero (r+1)-minor would have to lie in every one of
  those ideals, which is impossible, so the bound is also an upper bound.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InternalConsistencyError, ShapeError
from .qarith import CycloMatrix, row_space

__all__ = ["certified_chain_ranks", "chain_ranks", "exact_chain_ranks", "EXACT_DIM_LIMIT"]

# auto mode switches to modular ranks above this block dimension
EXACT_DIM_LIMIT = 40
_MAX_PRIMES = 4000


def _check_chain(blocks):
    if not blocks:
        return
    n = blocks[0].n
    for a, b in zip(blocks, blocks[1:]):
        if a.cols != b.rows or b.n != n:
            raise ShapeError(f"chain breaks between {a.shape} and {b.shape}")


def exact_chain_ranks(blocks: Sequence[CycloMatrix]) -> list[int]:
    _check_chain(blocks)
    out = []
    basis = None
    for blk in blocks:
        prod = blk if basis is None else basis @ blk
        basis = row_space(prod)
        out.append(basis.rows)
        if basis.rows == 0:
            out.extend([0] * (len(blocks) - len(out)))
            break
    return out


# -- modular route -------------------------------------------------------------------


def _prime_stream(n):
    """Primes p = 1 (mod n) below 2**26, largest first."""
    from sympy import isprime

    p = (kernels.MAX_PRIME - 1) // n * n + 1
    while p >= kernels.MAX_PRIME:
        p -= n
    while p > 2:
        if isprime(p):
            yield p
        p -= n


@lru_cache(maxsize=None)
def _roots_of_unity(p, n):
    from sympy.ntheory import primitive_root

    g = primitive_root(p)
    w = pow(g, (p - 1) // n, p)
    return tuple(pow(w, k, p) for k in range(1, n + 1) if math.gcd(k, n) == 1)


class _IntBlock:
    """A block scaled to integer coordinates, ready for reduction mod p."""

    def __init__(self, mat: CycloMatrix):
        self.rows, self.cols = mat.rows, mat.cols
        phi = mat.field.phi
        items = [(i, j, s) for i, row in enumerate(mat.sparse_rows) for j, s in row]
        lcm = 1
        for _, _, s in items:
            lcm = lcm * s.denominator // math.gcd(lcm, s.denominator)
        self.r_idx = np.array([i for i, _, _ in items], dtype=np.int64)
        self.c_idx = np.array([j for _, j, _ in items], dtype=np.int64)
        ints = [[x * (lcm // s.denominator) for x in s.numerators] for _, _, s in items]
        for v in ints:
            v.extend([0] * (phi - len(v)))
        big = any(abs(x) >= kernels.MAX_PRIME for v in ints for x in v)
        self.coeffs = np.array(ints, dtype=object if big else np.int64).reshape(len(items), phi)
        # L1 norm of each entry's coefficient vector bounds |sigma(entry)|
        h = np.zeros((self.rows, self.cols), dtype=np.float64)
        for (i, j, _), v in zip(items, ints):
            h[i, j] = float(sum(abs(x) for x in v))
        self.h = h

    def reduce(self, p, w):
        phi = self.coeffs.shape[1]
        wp = np.array([pow(w, k, p) for k in range(phi)], dtype=np.int64)
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        if len(self.r_idx) == 0:
            return out
        if self.coeffs.dtype == object:
            vals = np.array(
                [sum(int(c) % p * int(x) for c, x in zip(row, wp)) % p for row in self.coeffs],
                dtype=np.int64,
            )
        else:
            vals = ((self.coeffs % p) * wp).sum(axis=1) % p
        out[self.r_idx, self.c_idx] = vals
        return out


def _minor_bounds(blocks):
    """For each prefix: (log2 bounds of the top-k row norms, rank cap)."""
    info = []
    acc = None
    scale = 0.0
    for blk in blocks:
        acc = blk.h if acc is None else acc @ blk.h
        top = float(acc.max()) if acc.size else 0.0
        if top > 0:
            acc = acc / top
            scale += math.log2(top)
        norms = np.sqrt((acc * acc).sum(axis=1))
        nz = norms[norms > 0]
        if not np.all(np.isfinite(nz)):
            raise InternalConsistencyError("norm bound overflowed")
        logs = np.sort(np.log2(nz) + scale)[::-1]
        cap = min(len(nz), int((acc > 0).any(axis=0).sum()))
        info.append((np.concatenate([[0.0], np.cumsum(logs)]), cap))
    return info


def certified_chain_ranks(blocks: Sequence[CycloMatrix]) -> list[int]:
    _check_chain(blocks)
    if not blocks:
        return []
    n = blocks[0].n
    prepared = [_IntBlock(b) for b in blocks]
    bounds = _minor_bounds(prepared)
    best = [0] * len(blocks)
    bits = 0.0

    def settled(k):
        r = best[k]
        cumlogs, cap = bounds[k]
        if r >= cap:
            return True
        return bits > cumlogs[r + 1] + 1.0

    if all(settled(k) for k in range(len(blocks))):
        return best
    for count, p in enumerate(_prime_stream(n)):
        if count >= _MAX_PRIMES:
            raise InternalConsistencyError("modular rank did not certify within the prime budget")
        for w in _roots_of_unity(p, n):
            prod = None
            for k, blk in enumerate(prepared):
                red = blk.reduce(p, w)
                prod = red if prod is None else kernels.matmul_mod(prod, red, p)
                best[k] = max(best[k], kernels.rank_mod(prod, p))
        bits += math.log2(p)
        if all(settled(k) for k in range(len(blocks))):
            return best
    raise InternalConsistencyError("ran out of primes before the rank certified")


def chain_ranks(blocks: Sequence[CycloMatrix], method: str = "auto") -> list[int]:
    """Dispatch to the exact or certified modular route.

    ``auto`` picks exact elimination when every block is small.
    """
    if method == "exact":
        return exact_chain_ranks(blocks)
    if method == "modular":
        return certified_chain_ranks(blocks)
    if method != "auto":
        raise ValueError(f"rank method must be exact, modular or auto, got {method!r}")
    if all(max(b.rows, b.cols) <= EXACT_DIM_LIMIT for b in blocks):
        return exact_chain_ranks(blocks)
    return certified_chain_ranks(blocks)
