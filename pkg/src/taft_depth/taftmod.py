"""Explicit right modules over the Taft algebra as pairs of matrices.

Vectors are rows and the matrix of a product xy is (matrix of x)(matrix of y),
so the defining relation ``ba = q ab`` reads ``B @ A == q * (A @ B)``.  Here B
is the action of the grouplike generator and A that of the nilpotent one.

Decomposition works through the grading by B-eigenvalues: A lowers the grade
by one, so a module is a graded nilpotent operator and the ranks of its
restricted powers determine the Jordan chains (the algebra is serial).
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, IncompatibleOrderError, IngestError, InvariantViolation, ShapeError
from .greenring import GreenElement, IndecLabel, all_labels, label_to_pj
from .qarith import (
    CycloMatrix,
    field,
    inverse,
    nullspace,
    parse_scalar,
    q_binomial,
    q_factorial,
    q_int,
    row_reduce,
)
from .ranks import chain_ranks

__all__ = [
    "GradedJordanSignature",
    "TaftModule",
    "calibration_table",
    "decompose",
    "direct_sum",
    "dump_module",
    "grade_decompose",
    "graded_signature",
    "load_module",
    "module_from_json",
    "module_of_Q_direct",
    "module_to_json",
    "projective_module",
    "q_basis_index",
    "save_module",
    "special_basis_vectors",
    "standard_module",
    "submodule",
    "tensor_module",
    "u_closed_form",
    "validate_module",
    "w_closed_form",
]


def _check_order(n):
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"order must be an integer >= 2, got {n!r}")


def validate_module(n: int, B: CycloMatrix, A: CycloMatrix) -> None:
    """Raise InvariantViolation unless (B, A) satisfy the Taft relations."""
    if B.n != n or A.n != n:
        raise IncompatibleOrderError(f"action matrices are not over Q(z_{n})")
    d = B.rows
    if B.shape != (d, d) or A.shape != (d, d):
        raise ShapeError(f"actions must be square of equal size, got {B.shape} and {A.shape}")
    if d == 0:
        return
    f = field(n)
    if B.is_diagonal():
        if any(x**n != f.one for x in B.diagonal_entries()):
            raise InvariantViolation("B^n != I")
    elif B**n != CycloMatrix.identity(n, d):
        raise InvariantViolation("B^n != I")
    P = A
    for _ in range(n - 1):
        if P.is_zero():
            break
        P = P @ A
    if not P.is_zero():
        raise InvariantViolation("A^n != 0")
    if B @ A != (A @ B).scale(f.q):
        raise InvariantViolation("B A != q A B")


class TaftModule:
    """Finite-dimensional right module: order ``n``, actions ``B`` and ``A``."""

    __slots__ = ("n", "B", "A", "_graded")

    def __init__(self, n: int, B: CycloMatrix, A: CycloMatrix, check: bool = True):
        _check_order(n)
        if check:
            validate_module(n, B, A)
        self.n = n
        self.B = B
        self.A = A
        self._graded = None

    @property
    def dim(self) -> int:
        return self.B.rows

    def __eq__(self, other):
        if not isinstance(other, TaftModule):
            return NotImplemented
        return self.n == other.n and self.B == other.B and self.A == other.A

    def __hash__(self):
        return hash((self.n, self.B, self.A))

    def __repr__(self):
        return f"TaftModule(n={self.n}, dim={self.dim})"

    def act(self, vec, word: str):
        """Apply a word in the letters 'a' and 'b' to a row vector, left to right."""
        out = list(vec)
        for ch in word:
            if ch == "a":
                out = self.A.vecmat(out)
            elif ch == "b":
                out = self.B.vecmat(out)
            else:
                raise DomainError(f"unknown generator {ch!r}")
        return out


def direct_sum(*mods: TaftModule) -> TaftModule:
    if not mods:
        raise DomainError("direct sum of no modules")
    n = mods[0].n
    if any(m.n != n for m in mods):
        raise IncompatibleOrderError("direct sum of modules of different orders")
    B = CycloMatrix.block_diag([m.B for m in mods], n)
    A = CycloMatrix.block_diag([m.A for m in mods], n)
    return TaftModule(n, B, A, check=False)


# -- standard modules ----------------------------------------------------------------


def projective_module(i: int, r: int, n: int) -> TaftModule:
    """P_i J^r: chain v_0 -> v_1 -> ... -> v_{n-1-r}, B v_k = q^(n-i+1-r-k) v_k."""
    _check_order(n)
    if not (1 <= i <= n) or not (0 <= r <= n - 1):
        raise DomainError(f"P_{i} J^{r} is out of range for n={n}")
    f = field(n)
    d = n - r
    B = CycloMatrix.diagonal(n, [f.q_pow(n - i + 1 - r - k) for k in range(d)])
    A = CycloMatrix.from_sparse(n, d, d, {(k, k + 1): 1 for k in range(d - 1)})
    return TaftModule(n, B, A, check=False)


def standard_module(L: IndecLabel, n: int) -> TaftModule:
    i, r = label_to_pj(L, n)
    return projective_module(i, r, n)


def tensor_module(M: TaftModule, N: TaftModule, check: bool = True) -> TaftModule:
    """Tensor product through the coproduct: B -> B x B, A -> A x B + 1 x A."""
    if M.n != N.n:
        raise DomainError(f"tensor of modules of orders {M.n} and {N.n}")
    n = M.n
    B = M.B.kron(N.B)
    A = M.A.kron(N.B) + CycloMatrix.identity(n, M.dim).kron(N.A)
    return TaftModule(n, B, A, check=check)


# -- grading -------------------------------------------------------------------------


class _Graded:
    __slots__ = ("dims", "bases", "blocks")

    def __init__(self, dims, bases, blocks):
        self.dims = dims  # dims[j] = dimension of the q^j eigenspace
        self.bases = bases  # bases[j] = CycloMatrix whose rows span grade j
        self.blocks = blocks  # blocks[j] = A from grade j to grade j-1


def _grading(M: TaftModule) -> _Graded:
    if M._graded is not None:
        return M._graded
    n, d = M.n, M.dim
    f = field(n)
    exps = {f.q_pow(e): e for e in range(n)}
    if M.B.is_diagonal():
        idx = [[] for _ in range(n)]
        for k, x in enumerate(M.B.diagonal_entries()):
            e = exps.get(x)
            if e is None:
                raise InvariantViolation(f"B[{k},{k}] = {x} is not a power of q")
            idx[e].append(k)
        bases = [
            CycloMatrix.from_sparse(n, len(ix), d, {(t, k): 1 for t, k in enumerate(ix)})
            for ix in idx
        ]
        A = M.A
        for j in range(n):
            src, dst = idx[j], idx[(j - 1) % n]
            dst_set = set(dst)
            for k in src:
                for col, _ in A.sparse_rows[k]:
                    if col not in dst_set:
                        raise InvariantViolation(f"A sends grade {j} outside grade {(j - 1) % n}")
        blocks = [A.submatrix(idx[j], idx[(j - 1) % n]) for j in range(n)]
        graded = _Graded([len(ix) for ix in idx], bases, blocks)
    else:
        eye = CycloMatrix.identity(n, d)
        bases = [nullspace(M.B - eye.scale(f.q_pow(j))) for j in range(n)]
        dims = [b.rows for b in bases]
        if sum(dims) != d:
            raise InvariantViolation("B is not diagonalizable over powers of q")
        T = CycloMatrix.vstack(bases, n, d)
        Ap = T @ M.A @ inverse(T)
        offs = [sum(dims[:j]) for j in range(n + 1)]
        blocks = []
        for j in range(n):
            rows = range(offs[j], offs[j + 1])
            lower = (j - 1) % n
            for r in rows:
                for col, _ in Ap.sparse_rows[r]:
                    if not (offs[lower] <= col < offs[lower + 1]):
                        raise InvariantViolation(f"A sends grade {j} outside grade {lower}")
            blocks.append(Ap.submatrix(list(rows), list(range(offs[lower], offs[lower + 1]))))
        graded = _Graded(dims, bases, blocks)
    M._graded = graded
    return graded


def grade_decompose(M: TaftModule) -> list[CycloMatrix]:
    """Bases (as matrix rows) of the q^j eigenspaces of B, j = 0..n-1."""
    return list(_grading(M).bases)


class GradedJordanSignature:
    """Jordan chains keyed by (top grade, length)."""

    __slots__ = ("n", "multiplicities")

    def __init__(self, n, multiplicities):
        self.n = n
        self.multiplicities = {k: v for k, v in sorted(multiplicities.items()) if v}

    def total_dim(self) -> int:
        return sum(l * m for (_, l), m in self.multiplicities.items())

    def __eq__(self, other):
        return (
            isinstance(other, GradedJordanSignature)
            and self.n == other.n
            and self.multiplicities == other.multiplicities
        )

    def __repr__(self):
        return f"GradedJordanSignature(n={self.n}, {self.multiplicities})"


def graded_signature(M: TaftModule, rank_method: str = "auto") -> GradedJordanSignature:
    n = M.n
    g = _grading(M)
    # rho[j][k] = rank of A^k on grade j, k = 0..n+1
    rho = []
    for j in range(n):
        row = [g.dims[j]]
        if g.dims[j] == 0:
            row += [0] * n
        else:
            chain = [g.blocks[(j - t) % n] for t in range(n)]
            row += chain_ranks(chain, rank_method)
        if row[n] != 0:
            raise InvariantViolation(f"A^{n} does not vanish on grade {j}")
        row.append(0)
        rho.append(row)
    mult = {}
    for j in range(n):
        up = rho[(j + 1) % n]
        for l in range(1, n + 1):
            m = (rho[j][l - 1] - rho[j][l]) - (up[l] - up[l + 1])
            if m < 0:
                raise InvariantViolation(f"negative chain count for top grade {j}, length {l}")
            if m:
                mult[(j, l)] = m
    sig = GradedJordanSignature(n, mult)
    if sig.total_dim() != M.dim:
        raise InvariantViolation(f"chains cover {sig.total_dim()} of {M.dim} dimensions")
    return sig


@lru_cache(maxsize=None)
def _calibration(n):
    table = {}
    for L in all_labels(n):
        sig = graded_signature(standard_module(L, n), "exact").multiplicities
        if len(sig) != 1 or next(iter(sig.values())) != 1:
            raise InvariantViolation(f"standard module {L} is not a single chain")
        key = next(iter(sig))
        if key in table:
            raise InvariantViolation(f"{L} and {table[key]} share the chain type {key}")
        table[key] = L
    if len(table) != n * n:
        raise InvariantViolation("calibration table is not a bijection")
    return table


def calibration_table(n: int) -> dict[tuple[int, int], IndecLabel]:
    """Map (top grade, chain length) -> label, read off the standard modules."""
    _check_order(n)
    return dict(_calibration(n))


def decompose(M: TaftModule, rank_method: str = "auto") -> GreenElement:
    """Krull-Schmidt decomposition of ``M`` as a Green-ring element."""
    sig = graded_signature(M, rank_method)
    table = _calibration(M.n)
    return GreenElement({table[key]: m for key, m in sig.multiplicities.items()})


# -- submodules ----------------------------------------------------------------------


def submodule(M: TaftModule, vectors: Sequence[Sequence]) -> TaftModule:
    """The module induced on the span of ``vectors``, which must be stable."""
    n, d = M.n, M.dim
    span, rk, pivots = row_reduce(CycloMatrix.from_rows(n, vectors, cols=d))
    basis = [list(span.row(t)) for t in range(rk)]

    def coords(vec):
        c = [vec[p] for p in pivots]
        # reduced echelon rows carry the identity in the pivot columns
        resid = list(vec)
        for x, b in zip(c, basis):
            if x:
                for k, y in enumerate(b):
                    if y:
                        resid[k] = resid[k] - x * y
        if any(resid):
            raise InvariantViolation("span is not stable under the action")
        return c

    Bs = [coords(M.B.vecmat(v)) for v in basis]
    As = [coords(M.A.vecmat(v)) for v in basis]
    if rk == 0:
        z = CycloMatrix.zeros(n, 0, 0)
        return TaftModule(n, z, z, check=False)
    return TaftModule(n, CycloMatrix.from_rows(n, Bs, rk), CycloMatrix.from_rows(n, As, rk))


# -- the quotient module built from its action formulas -------------------------------


def q_basis_index(i: int, j: int, n: int) -> int:
    """Position of e_{i,j} (i taken mod n): grade-major, then i."""
    return j * n + (i % n)


def module_of_Q_direct(n: int) -> TaftModule:
    """Q with basis e_{i,j}: e.b = q^j e, e_{i,j}.a = (j)_q (e_{i,j-1} - q^(j-1) e_{i+1,j-1})."""
    _check_order(n)
    f = field(n)
    d = n * n
    B = CycloMatrix.diagonal(n, [f.q_pow(j) for j in range(n) for _ in range(n)])
    items = {}
    for j in range(1, n):
        c = q_int(j, n)
        for i in range(n):
            row = q_basis_index(i, j, n)
            items[(row, q_basis_index(i, j - 1, n))] = c
            items[(row, q_basis_index(i + 1, j - 1, n))] = -c * f.q_pow(j - 1)
    A = CycloMatrix.from_sparse(n, d, d, items)
    return TaftModule(n, B, A, check=False)


def _u_vector(l, n, r=0):
    f = field(n)
    vec = [f.zero] * (n * n)
    for i in range(1, n + 1):
        c = f.q_pow(i * (l - 1)) * q_binomial(i + n - 2 - r, n - 1 - r, n)
        k = q_basis_index(i, l - 1 - r, n)
        vec[k] = vec[k] + c
    return vec


def _w_vector(l, n, r=0):
    f = field(n)
    vec = [f.zero] * (n * n)
    for i in range(1, n + 1):
        c = f.q_pow(-i * (l + 1)) * q_binomial(i + l - 2 - r, l - 1 - r, n)
        k = q_basis_index(i, n - 1 - r, n)
        vec[k] = vec[k] + c
    return vec


def special_basis_vectors(n: int):
    """The vectors u_l (l = 1..n) and w_l (l = 1..n-1) as coordinate lists.

    Checks on the way that u_n equals w_n and that u_l collapses to
    q^(l-1) e_{1,l-1}.
    """
    _check_order(n)
    f = field(n)
    u = {l: _u_vector(l, n) for l in range(1, n + 1)}
    w = {l: _w_vector(l, n) for l in range(1, n)}
    if _w_vector(n, n) != u[n]:
        raise InvariantViolation("u_n and w_n differ")
    for l, vec in u.items():
        expect = [f.zero] * (n * n)
        expect[q_basis_index(1, l - 1, n)] = f.q_pow(l - 1)
        if vec != expect:
            raise InvariantViolation(f"u_{l} does not collapse to a single basis vector")
    return u, w


def u_closed_form(l: int, r: int, n: int):
    """u_l . a^r from the factorial-ratio formula (not by applying A)."""
    scale = q_factorial(l - 1, n) / q_factorial(l - r - 1, n)
    return [scale * x for x in _u_vector(l, n, r)]


def w_closed_form(l: int, r: int, n: int):
    scale = q_factorial(n - 1, n) / q_factorial(n - r - 1, n)
    return [scale * x for x in _w_vector(l, n, r)]


# -- JSON interchange ----------------------------------------------------------------

_VAR = "q"


def module_to_json(M: TaftModule) -> dict:
    return {
        "n": M.n,
        "dim": M.dim,
        "B": [[x.to_text(_VAR) for x in r] for r in M.B.to_rows()],
        "A": [[x.to_text(_VAR) for x in r] for r in M.A.to_rows()],
    }


def dump_module(M: TaftModule) -> str:
    return json.dumps(module_to_json(M), indent=1, sort_keys=True) + "\n"


def save_module(M: TaftModule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_module(M))


def _matrix_field(data, key, n, dim):
    raw = data.get(key)
    if not isinstance(raw, list) or len(raw) != dim:
        raise IngestError(f"field {key!r}: expected a list of {dim} rows")
    rows = []
    for i, r in enumerate(raw):
        if not isinstance(r, list) or len(r) != dim:
            raise IngestError(f"field {key}[{i}]: expected a row of {dim} entries")
        row = []
        for j, t in enumerate(r):
            try:
                row.append(parse_scalar(t, n, var=_VAR))
            except IngestError as exc:
                raise IngestError(f"field {key}[{i}][{j}]: {exc}") from None
        rows.append(row)
    return CycloMatrix.from_rows(n, rows, dim)


def module_from_json(data, n: int | None = None) -> TaftModule:
    if not isinstance(data, dict):
        raise IngestError("module file must hold a JSON object")
    for key in ("n", "dim", "B", "A"):
        if key not in data:
            raise IngestError(f"missing field {key!r}")
    fn, dim = data["n"], data["dim"]
    if not isinstance(fn, int) or isinstance(fn, bool) or fn < 2:
        raise IngestError(f"field 'n': expected an integer >= 2, got {fn!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise IngestError(f"field 'dim': expected a non-negative integer, got {dim!r}")
    if n is not None and fn != n:
        raise IngestError(f"field 'n': file is for n={fn} but n={n} was requested")
    B = _matrix_field(data, "B", fn, dim)
    A = _matrix_field(data, "A", fn, dim)
    try:
        return TaftModule(fn, B, A)
    except InvariantViolation as exc:
        raise IngestError(f"module relations fail: {exc}") from None


def load_module(path, n: int | None = None) -> TaftModule:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return module_from_json(data, n)
    except IngestError as exc:
        raise IngestError(f"{path}: {exc}") from None
