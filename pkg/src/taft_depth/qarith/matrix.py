"""Dense exact matrices over Q(z_n) and fraction-aware Gaussian elimination.

Storage is dense and row-major, but the kernels iterate only over nonzero
entries: the matrices met in practice (module actions, spanning sets of
ideals) are extremely sparse, and skipping zeros is what keeps exact
elimination on ~1000 x 600 systems interactive.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, NamedTuple, Sequence

from ..errors import IncompatibleOrderError, ShapeError
from .cyclotomic import CycloScalar, field

__all__ = [
    "CycloMatrix",
    "SubspaceQuotient",
    "inverse",
    "nullspace",
    "rank",
    "row_reduce",
    "row_space",
    "subspace_quotient",
]


class CycloMatrix:
    """An immutable rows x cols matrix of :class:`CycloScalar` of a fixed order."""

    __slots__ = ("n", "rows", "cols", "entries", "__dict__")

    def __init__(self, n: int, rows: int, cols: int, entries: Sequence[CycloScalar]):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape {rows}x{cols}")
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        f = field(n)
        ents = tuple(entries)
        for e in ents:
            if e.field is not f:
                raise IncompatibleOrderError(
                    f"entry of order {e.order} in matrix of order {n}"
                )
        self.n = n
        self.rows = rows
        self.cols = cols
        self.entries = ents

    # -- constructors ------------------------------------------------------------

    @classmethod
    def _trusted(cls, n, rows, cols, entries):
        obj = object.__new__(cls)
        obj.n = n
        obj.rows = rows
        obj.cols = cols
        obj.entries = tuple(entries)
        return obj

    @classmethod
    def zeros(cls, n: int, rows: int, cols: int) -> "CycloMatrix":
        return cls._trusted(n, rows, cols, (field(n).zero,) * (rows * cols))

    @classmethod
    def identity(cls, n: int, size: int) -> "CycloMatrix":
        f = field(n)
        ents = [f.zero] * (size * size)
        for i in range(size):
            ents[i * size + i] = f.one
        return cls._trusted(n, size, size, ents)

    @classmethod
    def diagonal(cls, n: int, values: Sequence) -> "CycloMatrix":
        f = field(n)
        size = len(values)
        ents = [f.zero] * (size * size)
        for i, v in enumerate(values):
            ents[i * size + i] = f.scalar(v)
        return cls._trusted(n, size, size, ents)

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence], cols: int | None = None) -> "CycloMatrix":
        f = field(n)
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ShapeError("cannot infer column count of an empty row list")
            cols = len(rows[0])
        ents = []
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise ShapeError(f"row {i} has length {len(r)}, expected {cols}")
            ents.extend(f.scalar(x) for x in r)
        return cls._trusted(n, len(rows), cols, ents)

    @classmethod
    def from_sparse(cls, n: int, rows: int, cols: int, items) -> "CycloMatrix":
        """Build from ``{(i, j): value}`` or an iterable of ``((i, j), value)``."""
        f = field(n)
        ents = [f.zero] * (rows * cols)
        pairs = items.items() if hasattr(items, "items") else items
        for (i, j), v in pairs:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"index ({i}, {j}) outside {rows}x{cols}")
            ents[i * cols + j] = ents[i * cols + j] + f.scalar(v)
        return cls._trusted(n, rows, cols, ents)

    # -- access ------------------------------------------------------------------

    @property
    def field(self):
        return field(self.n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[CycloScalar, ...]:
        c = self.cols
        return self.entries[i * c : (i + 1) * c]

    def to_rows(self) -> list[list[CycloScalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @cached_property
    def sparse_rows(self) -> tuple[tuple[tuple[int, CycloScalar], ...], ...]:
        """Per row, the ``(column, value)`` pairs of nonzero entries."""
        c = self.cols
        ents = self.entries
        out = []
        for i in range(self.rows):
            base = i * c
            out.append(tuple((j, ents[base + j]) for j in range(c) if ents[base + j]))
        return tuple(out)

    def nnz(self) -> int:
        return sum(len(r) for r in self.sparse_rows)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_diagonal(self) -> bool:
        return all(j == i for i, r in enumerate(self.sparse_rows) for j, _ in r)

    def diagonal_entries(self) -> tuple[CycloScalar, ...]:
        return tuple(self.entries[i * self.cols + i] for i in range(min(self.rows, self.cols)))

    # -- algebra -------------------------------------------------------------------

    def _check_same(self, other):
        if not isinstance(other, CycloMatrix):
            raise TypeError("expected CycloMatrix")
        if other.n != self.n:
            raise IncompatibleOrderError(f"orders differ: {self.n} vs {other.n}")

    def __eq__(self, other):
        if not isinstance(other, CycloMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.n, self.rows, self.cols, self.entries))

    def __add__(self, other):
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return CycloMatrix._trusted(
            self.n, self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        self._check_same(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return CycloMatrix._trusted(
            self.n, self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return CycloMatrix._trusted(self.n, self.rows, self.cols, [-a for a in self.entries])

    def scale(self, s) -> "CycloMatrix":
        s = self.field.scalar(s)
        return CycloMatrix._trusted(self.n, self.rows, self.cols, [s * a for a in self.entries])

    def __matmul__(self, other):
        self._check_same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        zero = f.zero
        oc = other.cols
        right = other.sparse_rows
        ents = []
        for r in self.sparse_rows:
            acc = {}
            for k, a in r:
                for j, b in right[k]:
                    p = a * b
                    prev = acc.get(j)
                    acc[j] = p if prev is None else prev + p
            row = [zero] * oc
            for j, v in acc.items():
                row[j] = v
            ents.extend(row)
        return CycloMatrix._trusted(self.n, self.rows, oc, ents)

    def __pow__(self, k: int):
        if self.rows != self.cols:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = CycloMatrix.identity(self.n, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> "CycloMatrix":
        r, c = self.rows, self.cols
        ents = self.entries
        return CycloMatrix._trusted(
            self.n, c, r, [ents[i * c + j] for j in range(c) for i in range(r)]
        )

    def kron(self, other: "CycloMatrix") -> "CycloMatrix":
        """Kronecker product; row index (i, k) -> i * other.rows + k."""
        self._check_same(other)
        f = self.field
        R = self.rows * other.rows
        C = self.cols * other.cols
        ents = [f.zero] * (R * C)
        for i, srow in enumerate(self.sparse_rows):
            for j, a in srow:
                for k, orow in enumerate(other.sparse_rows):
                    base = (i * other.rows + k) * C + j * other.cols
                    for l, b in orow:
                        ents[base + l] = a * b
        return CycloMatrix._trusted(self.n, R, C, ents)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "CycloMatrix":
        c = self.cols
        ents = self.entries
        return CycloMatrix._trusted(
            self.n, len(rows), len(cols), [ents[i * c + j] for i in rows for j in cols]
        )

    def vecmat(self, vec: Sequence[CycloScalar]) -> list[CycloScalar]:
        """Row vector times this matrix."""
        if len(vec) != self.rows:
            raise ShapeError(f"vector of length {len(vec)} against {self.shape}")
        f = self.field
        out = [f.zero] * self.cols
        for x, r in zip(vec, self.sparse_rows):
            if x:
                for j, a in r:
                    out[j] = out[j] + x * a
        return out

    @staticmethod
    def block_diag(blocks: Sequence["CycloMatrix"], n: int | None = None) -> "CycloMatrix":
        if n is None:
            if not blocks:
                raise ShapeError("block_diag of no blocks needs an explicit order")
            n = blocks[0].n
        R = sum(b.rows for b in blocks)
        C = sum(b.cols for b in blocks)
        items = {}
        r0 = c0 = 0
        for b in blocks:
            if b.n != n:
                raise IncompatibleOrderError("blocks of different orders")
            for i, row in enumerate(b.sparse_rows):
                for j, v in row:
                    items[(r0 + i, c0 + j)] = v
            r0 += b.rows
            c0 += b.cols
        return CycloMatrix.from_sparse(n, R, C, items)

    @staticmethod
    def vstack(blocks: Sequence["CycloMatrix"], n: int, cols: int) -> "CycloMatrix":
        ents = []
        rows = 0
        for b in blocks:
            if b.cols != cols or b.n != n:
                raise ShapeError("vstack blocks disagree on width or order")
            ents.extend(b.entries)
            rows += b.rows
        return CycloMatrix._trusted(n, rows, cols, ents)

    def __repr__(self):
        return f"CycloMatrix(n={self.n}, shape={self.rows}x{self.cols}, nnz={self.nnz()})"


# -- elimination -----------------------------------------------------------------


def _eliminate(n, rows_sparse, ncols, full=True):
    """Gauss-Jordan on a list of ``{col: value}`` dicts (mutated in place).

    Returns (pivot_rows, pivot_columns).  With ``full`` the pivot column is
    also cleared above the pivot, giving reduced row-echelon form.
    """
    rows = rows_sparse
    pivot_cols = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if c in rows[i]:
                piv = i
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = prow[c].inv()
        if inv != field(n).one:
            for k in prow:
                prow[k] = prow[k] * inv
        items = list(prow.items())
        start = 0 if full else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            row = rows[i]
            fac = row.get(c)
            if fac is None:
                continue
            for k, v in items:
                cur = row.get(k)
                nv = -(fac * v) if cur is None else cur - fac * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivot_cols


def _to_sparse_dicts(M: CycloMatrix):
    return [dict(r) for r in M.sparse_rows]


def _from_sparse_dicts(n, rows, cols):
    f = field(n)
    ents = [f.zero] * (len(rows) * cols)
    for i, r in enumerate(rows):
        base = i * cols
        for j, v in r.items():
            ents[base + j] = v
    return CycloMatrix._trusted(n, len(rows), cols, ents)


def row_reduce(M: CycloMatrix) -> tuple[CycloMatrix, int, tuple[int, ...]]:
    """Exact reduced row-echelon form.

    Returns ``(reduced, rank, pivot_columns)``; ``reduced`` has the shape of
    ``M`` with its zero rows last.  Pivots are the first nonzero entry in
    column order.
    """
    rows, pivots = _eliminate(M.n, _to_sparse_dicts(M), M.cols, full=True)
    return _from_sparse_dicts(M.n, rows, M.cols), len(pivots), tuple(pivots)


def rank(M: CycloMatrix) -> int:
    """Exact rank (forward elimination only)."""
    _, pivots = _eliminate(M.n, _to_sparse_dicts(M), M.cols, full=False)
    return len(pivots)


def row_space(M: CycloMatrix) -> CycloMatrix:
    """The nonzero rows of the reduced row-echelon form of ``M``."""
    reduced, r, _ = row_reduce(M)
    return reduced.submatrix(range(r), range(M.cols))


def nullspace(M: CycloMatrix) -> CycloMatrix:
    """Basis (as rows) of ``{v : v @ M == 0}``, the left kernel of ``M``."""
    # left kernel of M = right kernel of M^T
    T = M.transpose()
    reduced, r, pivots = row_reduce(T)
    f = M.field
    free = [j for j in range(T.cols) if j not in set(pivots)]
    basis = []
    prows = [dict(reduced.sparse_rows[i]) for i in range(r)]
    for fcol in free:
        v = [f.zero] * T.cols
        v[fcol] = f.one
        for pc, prow in zip(pivots, prows):
            val = prow.get(fcol)
            if val is not None:
                v[pc] = -val
        basis.append(v)
    return CycloMatrix.from_rows(M.n, basis, cols=T.cols) if basis else CycloMatrix.zeros(M.n, 0, T.cols)


def inverse(M: CycloMatrix) -> CycloMatrix:
    """Exact inverse of a square matrix; raises ShapeError if singular."""
    if M.rows != M.cols:
        raise ShapeError("inverse of a non-square matrix")
    size = M.rows
    f = M.field
    aug = []
    for i, r in enumerate(M.sparse_rows):
        d = dict(r)
        d[size + i] = f.one
        aug.append(d)
    rows, pivots = _eliminate(M.n, aug, 2 * size, full=True)
    if pivots[:size] != list(range(size)) or len(pivots) < size:
        raise ShapeError("matrix is singular")
    ents = [f.zero] * (size * size)
    for i, r in enumerate(rows):
        for j, v in r.items():
            if j >= size:
                ents[i * size + (j - size)] = v
    return CycloMatrix._trusted(M.n, size, size, ents)


class _Projector:
    """Maps an ambient vector to its coordinates on the coset basis."""

    def __init__(self, n, reduced_rows, pivots, free, ambient_dim):
        self.n = n
        self._rows = reduced_rows
        self.pivot_columns = tuple(pivots)
        self.free_columns = tuple(free)
        self.ambient_dim = ambient_dim

    def __call__(self, vec) -> list[CycloScalar]:
        f = field(self.n)
        if isinstance(vec, dict):
            v = {k: f.scalar(x) for k, x in vec.items() if x}
        else:
            if len(vec) != self.ambient_dim:
                raise ShapeError(f"vector of length {len(vec)}, ambient dimension {self.ambient_dim}")
            v = {k: f.scalar(x) for k, x in enumerate(vec) if x}
        for pc, row in zip(self.pivot_columns, self._rows):
            fac = v.get(pc)
            if fac is None:
                continue
            for k, val in row.items():
                cur = v.get(k)
                nv = -(fac * val) if cur is None else cur - fac * val
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return [v.get(c, f.zero) for c in self.free_columns]


class SubspaceQuotient(NamedTuple):
    coset_basis: CycloMatrix
    project: Callable[..., list]


def subspace_quotient(ambient_dim: int, subspace_rows: CycloMatrix) -> SubspaceQuotient:
    """Quotient of the ambient space by the row span of ``subspace_rows``.

    The coset basis consists of the standard unit vectors at non-pivot
    columns; ``project`` reduces a vector modulo the subspace and returns its
    coordinates on that basis.  ``project`` also accepts ``{index: value}``
    dicts for sparse input.
    """
    if subspace_rows.cols != ambient_dim:
        raise ShapeError(
            f"subspace vectors have length {subspace_rows.cols}, ambient dimension is {ambient_dim}"
        )
    n = subspace_rows.n
    rows, pivots = _eliminate(n, _to_sparse_dicts(subspace_rows), ambient_dim, full=True)
    rows = rows[: len(pivots)]
    pset = set(pivots)
    free = [c for c in range(ambient_dim) if c not in pset]
    f = field(n)
    basis = CycloMatrix.from_sparse(n, len(free), ambient_dim, {(i, c): f.one for i, c in enumerate(free)})
    return SubspaceQuotient(basis, _Projector(n, rows, pivots, free, ambient_dim))
