"""The Drinfeld double of the Taft algebra as a normal-form rewriting algebra.

Elements are combinations of ordered monomials a^i b^j c^r d^s.  Products are
computed by concatenating letter words and rewriting adjacent out-of-order
pairs until every word is sorted (a < b < c < d), then truncating powers.

The Taft algebra sits inside as the subalgebra generated by a and b; the
quotient of the double by the left ideal generated by the augmentation ideal
of that subalgebra is the module Q.
"""

from __future__ import annotations

import threading
from functools import lru_cache
from typing import NamedTuple

from .errors import DomainError, IncompatibleOrderError, InvariantViolation
from .qarith import CycloMatrix, CycloScalar, field, inverse, rank, row_space, subspace_quotient
from .taftmod import TaftModule

__all__ = [
    "DoubleElement",
    "Monomial",
    "build_Rplus_D",
    "monomial_index",
    "multiply",
    "normalize_word",
    "quotient_module_from_double",
    "right_multiply_generator",
]

A, B, C, D = 0, 1, 2, 3
_LETTERS = "abcd"


class Monomial(NamedTuple):
    """Exponents of a^i b^j c^r d^s."""

    i: int
    j: int
    r: int
    s: int

    def word(self) -> tuple[int, ...]:
        return (A,) * self.i + (B,) * self.j + (C,) * self.r + (D,) * self.s

    def to_text(self) -> str:
        return f"a^{self.i} b^{self.j} c^{self.r} d^{self.s}"


def monomial_index(m: Monomial, n: int) -> int:
    """Coordinate of a monomial in the n^4-dimensional PBW coordinate space."""
    return ((m.i * n + m.j) * n + m.r) * n + m.s


# -- rewriting -----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _rules(n):
    """Replacement words for each out-of-order adjacent pair (x, y) with x > y."""
    f = field(n)
    q = f.q
    return {
        (B, A): (((A, B), q),),
        (C, A): (((A, C), q),),
        (C, B): (((B, C), f.one),),
        (D, B): (((B, D), q),),
        (D, C): (((C, D), q),),
        (D, A): (((A, D), q), ((), f.one), ((B, C), -f.one)),
    }


def _prune(word, n):
    """Drop runs b^n, c^n; return None if a run a^n or d^n kills the word."""
    out = []
    for x in word:
        out.append(x)
        if len(out) >= n and all(y == x for y in out[-n:]):
            if x in (A, D):
                return None
            del out[-n:]
    return tuple(out)


def _collapse(word):
    e = [0, 0, 0, 0]
    for x in word:
        e[x] += 1
    return Monomial(*e)


def normalize_word(word, n: int) -> dict[Monomial, CycloScalar]:
    """Rewrite a letter word (letters 0..3 for a..d) into PBW normal form."""
    rules = _rules(n)
    f = field(n)
    start = _prune(tuple(word), n)
    out: dict[Monomial, CycloScalar] = {}
    if start is None:
        return out
    pending = {start: f.one}
    while pending:
        w, c = pending.popitem()
        if not c:
            continue
        k = next((t for t in range(len(w) - 1) if w[t] > w[t + 1]), None)
        if k is None:
            m = _collapse(w)
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
            continue
        for repl, coef in rules[(w[k], w[k + 1])]:
            nw = _prune(w[:k] + repl + w[k + 2 :], n)
            if nw is None:
                continue
            prev = pending.get(nw)
            pending[nw] = c * coef if prev is None else prev + c * coef
    return {m: v for m, v in out.items() if v}


class DoubleElement:
    """A finite combination of normal-form monomials with nonzero coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        f = field(n)
        self.n = n
        clean = {}
        for m, v in (terms or {}).items():
            m = Monomial(*m)
            if not all(0 <= e < n for e in m):
                raise DomainError(f"{m.to_text()} is not a normal-form monomial for n={n}")
            v = f.scalar(v)
            if v:
                clean[m] = v
        self.terms = clean

    @classmethod
    def _trusted(cls, n, terms):
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def one(cls, n: int) -> "DoubleElement":
        return cls(n, {Monomial(0, 0, 0, 0): 1})

    @classmethod
    def generator(cls, name: str, n: int) -> "DoubleElement":
        k = _LETTERS.find(name)
        if len(name) != 1 or k < 0:
            raise DomainError(f"unknown generator {name!r}")
        e = [0, 0, 0, 0]
        e[k] = 1
        return cls(n, {Monomial(*e): 1})

    @classmethod
    def monomial(cls, i: int, j: int, r: int, s: int, n: int) -> "DoubleElement":
        return cls(n, {Monomial(i, j, r, s): 1})

    def _check(self, other):
        if self.n != other.n:
            raise IncompatibleOrderError(f"elements of orders {self.n} and {other.n}")

    def __eq__(self, other):
        if not isinstance(other, DoubleElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, v in other.terms.items():
            s = out[m] + v if m in out else v
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return DoubleElement._trusted(self.n, out)

    def __neg__(self):
        return DoubleElement._trusted(self.n, {m: -v for m, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "DoubleElement":
        s = field(self.n).scalar(s)
        if not s:
            return DoubleElement._trusted(self.n, {})
        return DoubleElement._trusted(self.n, {m: s * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, DoubleElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def coordinates(self) -> dict[int, CycloScalar]:
        return {monomial_index(m, self.n): v for m, v in self.terms.items()}

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            coef = self.terms[m].to_text("q")
            if sum(1 for x in self.terms[m].numerators if x) > 1:
                coef = f"({coef})"
            parts.append(f"{coef} * {m.to_text()}")
        return " + ".join(parts)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"DoubleElement(n={self.n}, {self.to_text()})"


_PRODUCT_LOCK = threading.Lock()
_PRODUCTS: dict[tuple[int, Monomial, Monomial], dict] = {}


def _monomial_product(m1: Monomial, m2: Monomial, n: int) -> dict:
    key = (n, m1, m2)
    hit = _PRODUCTS.get(key)
    if hit is None:
        hit = normalize_word(m1.word() + m2.word(), n)
        with _PRODUCT_LOCK:
            _PRODUCTS[key] = hit
    return hit


def _combine(n, pairs):
    out: dict[Monomial, CycloScalar] = {}
    for coef, prod in pairs:
        for m, v in prod.items():
            t = coef * v
            prev = out.get(m)
            out[m] = t if prev is None else prev + t
    return DoubleElement._trusted(n, {m: v for m, v in out.items() if v})


def multiply(x: DoubleElement, y: DoubleElement) -> DoubleElement:
    if x.n != y.n:
        raise DomainError(f"product of elements of orders {x.n} and {y.n}")
    n = x.n
    return _combine(
        n,
        (
            (c1 * c2, _monomial_product(m1, m2, n))
            for m1, c1 in x.terms.items()
            for m2, c2 in y.terms.items()
        ),
    )


def right_multiply_generator(x: DoubleElement, g: str) -> DoubleElement:
    """x * g for g in {'a', 'b', 'c', 'd'}, through the same memo table."""
    k = _LETTERS.find(g)
    if len(g) != 1 or k < 0:
        raise DomainError(f"unknown generator {g!r}")
    e = [0, 0, 0, 0]
    e[k] = 1
    gm = Monomial(*e)
    n = x.n
    return _combine(n, ((c, _monomial_product(m, gm, n)) for m, c in x.terms.items()))


# -- the quotient by the augmentation ideal -------------------------------------------


def _all_monomials(n):
    return [Monomial(i, j, r, s) for i in range(n) for j in range(n) for r in range(n) for s in range(n)]


@lru_cache(maxsize=8)
def build_Rplus_D(n: int) -> CycloMatrix:
    """Row-reduced basis of the left ideal spanned by a*m and (1-b)*m."""
    if not isinstance(n, int) or n < 2:
        raise DomainError(f"order must be an integer >= 2, got {n!r}")
    dim = n**4
    a = DoubleElement.generator("a", n)
    one_minus_b = DoubleElement.one(n) - DoubleElement.generator("b", n)
    items = {}
    row = 0
    for m in _all_monomials(n):
        me = DoubleElement._trusted(n, {m: field(n).one})
        for left in (a, one_minus_b):
            for col, v in multiply(left, me).coordinates().items():
                items[(row, col)] = v
            row += 1
    span = row_space(CycloMatrix.from_sparse(n, row, dim, items))
    if span.rows != dim - n * n:
        raise InvariantViolation(f"ideal has dimension {span.rows}, expected {dim - n * n}")
    return span


def quotient_module_from_double(n: int):
    """Q as the quotient of the double, on the classes of c^i d^j.

    Returns the module and the list of tags (i, j) in basis order.
    """
    f = field(n)
    dim = n**4
    quot = subspace_quotient(dim, build_Rplus_D(n))
    tags = [(i, j) for j in range(n) for i in range(n)]
    reps = [DoubleElement._trusted(n, {Monomial(0, 0, i, j): f.one}) for i, j in tags]
    T = CycloMatrix.from_rows(n, [quot.project(r.coordinates()) for r in reps], n * n)
    if rank(T) != n * n:
        raise InvariantViolation("classes of c^i d^j are not a basis of the quotient")
    Tinv = inverse(T)
    acts = {}
    for g in ("a", "b"):
        rows = [quot.project(right_multiply_generator(r, g).coordinates()) for r in reps]
        acts[g] = CycloMatrix.from_rows(n, rows, n * n) @ Tinv
    return TaftModule(n, acts["b"], acts["a"]), tags
