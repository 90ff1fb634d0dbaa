"""q-integers, q-factorials and Gauss polynomials at q = z_n."""

from __future__ import annotations

import threading

from ..errors import DomainError
from .cyclotomic import CycloScalar, field

__all__ = ["gauss_polynomial", "q_binomial", "q_factorial", "q_int"]


def q_int(j: int, n: int) -> CycloScalar:
    """(j)_q = 1 + q + ... + q^(j-1); zero exactly when n divides j."""
    if j < 0:
        raise DomainError(f"q-integer needs j >= 0, got {j}")
    f = field(n)
    # full periods of q sum to zero
    total = f.zero
    for k in range(j % n):
        total = total + f.q_pow(k)
    return total


def q_factorial(j: int, n: int) -> CycloScalar:
    """(j)!_q = (j)_q (j-1)_q ... (1)_q with (0)!_q = 1."""
    if j < 0:
        raise DomainError(f"q-factorial needs j >= 0, got {j}")
    f = field(n)
    out = f.one
    for k in range(1, j + 1):
        out = out * q_int(k, n)
        if not out:
            break
    return out


# Pascal rows of the recurrence, per order; rows[k][j] = (k choose j)_q.
_ROWS: dict[int, list[list[CycloScalar]]] = {}
_ROWS_LOCK = threading.Lock()


def _rows_upto(k: int, n: int):
    rows = _ROWS.get(n)
    if rows is not None and len(rows) > k:
        return rows
    with _ROWS_LOCK:
        rows = _ROWS.setdefault(n, [])
        f = field(n)
        while len(rows) <= k:
            m = len(rows)
            if m == 0:
                rows.append([f.one])
                continue
            prev = rows[m - 1]
            row = [f.one]
            for j in range(1, m):
                row.append(f.q_pow(j) * prev[j] + prev[j - 1])
            row.append(f.one)
            rows.append(row)
        return rows


def q_binomial(k: int, j: int, n: int) -> CycloScalar:
    """Gauss polynomial (k choose j)_q evaluated at q = z_n.

    Uses the recurrence (k, j) = q^j (k-1, j) + (k-1, j-1) with boundary values
    1 at j = 0 and j = k, plus the conventions (k-1 choose -1) = 0,
    (k choose k+1) = 0 and (-1 choose 0) = 1.
    """
    f = field(n)
    if k >= j >= 0:
        return _rows_upto(k, n)[k][j]
    if j == -1 and k >= -1:
        return f.zero
    if j == k + 1 and k >= 0:
        return f.zero
    if (k, j) == (-1, 0):
        return f.one
    raise DomainError(f"q-binomial ({k} choose {j}) is outside the supported domain")


def gauss_polynomial(k: int, j: int) -> tuple[int, ...]:
    """(k choose j)_q as an integer polynomial in q (ascending coefficients).

    Same recurrence and conventions as :func:`q_binomial`, but over Z[q]
    without reduction; the zero polynomial is returned as ``()``.
    """
    if not (k >= j >= 0):
        if (j == -1 and k >= -1) or (j == k + 1 and k >= 0):
            return ()
        if (k, j) == (-1, 0):
            return (1,)
        raise DomainError(f"Gauss polynomial ({k} choose {j}) is outside the supported domain")
    row = [(1,)]
    for m in range(1, k + 1):
        new = [(1,)]
        for i in range(1, m):
            shifted = (0,) * i + row[i]
            left = row[i - 1]
            size = max(len(shifted), len(left))
            new.append(
                tuple(
                    (shifted[t] if t < len(shifted) else 0) + (left[t] if t < len(left) else 0)
                    for t in range(size)
                )
            )
        new.append((1,))
        row = new
    return row[j]
