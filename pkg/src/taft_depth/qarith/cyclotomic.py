"""Exact arithmetic in the cyclotomic field Q(z), z a primitive n-th root of unity.

Elements are stored as an integer numerator vector over a single positive
denominator, in the power basis 1, z, ..., z^(phi-1) modulo the cyclotomic
polynomial Phi_n.  The pair is kept in lowest terms, so two elements are
equal exactly when their stored data agree.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from functools import lru_cache
from math import gcd

from ..errors import (
    IncompatibleOrderError,
    IngestError,
    InvalidOrderError,
    ZeroDivisorError,
)

__all__ = [
    "CyclotomicField",
    "CycloScalar",
    "cyclotomic_poly",
    "field",
    "parse_scalar",
]


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_mul_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div_int(num, den):
    """Divide integer polynomials (ascending coefficients) by a monic divisor."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    dq = len(num) - len(den)
    if dq < 0:
        raise ValueError("divisor degree exceeds dividend degree")
    quot = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = num[k + len(den) - 1]
        quot[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num):
        raise ValueError("division is not exact")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Return Phi_n as ascending integer coefficients.

    Phi_n is obtained by dividing x^n - 1 exactly by the product of Phi_d over
    the proper divisors d of n.

    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidOrderError(f"cyclotomic polynomial needs n >= 1, got {n!r}")
    xn1 = [-1] + [0] * (n - 1) + [1]
    prod = [1]
    for d in _divisors(n)[:-1]:
        prod = _poly_mul_int(prod, cyclotomic_poly(d))
    return tuple(_poly_exact_div_int(xn1, prod))


# -- polynomial helpers over Q for the extended Euclidean algorithm ----------


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod_q(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    r = [Fraction(x) for x in a]
    lead = Fraction(b[-1])
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                r[k + i] -= c * y
    return _trim(q), _trim(r[: len(b) - 1])


def _poly_sub_q(a, b):
    m = max(len(a), len(b))
    a = list(a) + [0] * (m - len(a))
    b = list(b) + [0] * (m - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _poly_mul_q(a, b):
    if not a or not b:
        return []
    return _trim(_poly_mul_int(a, b))


class CyclotomicField:
    """Q(z) for a primitive n-th root of unity z; use :func:`field` to obtain one."""

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2:
            raise InvalidOrderError(f"root-of-unity order must be an integer >= 2, got {n!r}")
        self.n = n
        self.modulus = cyclotomic_poly(n)
        self.phi = len(self.modulus) - 1
        phi = self.phi
        # power_table[k] = z^k reduced, for 0 <= k < max(2*phi - 1, n)
        top = max(2 * phi - 1, n)
        table = []
        cur = [1] + [0] * (phi - 1)
        for _ in range(top):
            table.append(tuple(cur))
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                for i in range(phi):
                    cur[i] -= lead * self.modulus[i]
        self._power_table = tuple(table)
        self.zero = CycloScalar._raw(self, (0,) * phi, 1)
        self.one = CycloScalar._raw(self, table[0], 1)
        self._q_powers = tuple(CycloScalar._raw(self, table[k], 1) for k in range(n))
        self.q = self._q_powers[1 % n]
        self._lock = threading.Lock()

    def __repr__(self):
        return f"CyclotomicField({self.n})"

    def __reduce__(self):
        return (field, (self.n,))

    def q_pow(self, k: int) -> "CycloScalar":
        """Return q^k for any integer k (negative exponents allowed)."""
        return self._q_powers[k % self.n]

    def scalar(self, value) -> "CycloScalar":
        """Coerce an int, Fraction or CycloScalar of this order into the field."""
        if isinstance(value, CycloScalar):
            if value.field is not self:
                raise IncompatibleOrderError(
                    f"scalar of order {value.order} used in field of order {self.n}"
                )
            return value
        if isinstance(value, int):
            return CycloScalar._make(self, [value] + [0] * (self.phi - 1), 1)
        if isinstance(value, Fraction):
            return CycloScalar._make(
                self, [value.numerator] + [0] * (self.phi - 1), value.denominator
            )
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coeffs(self, coeffs) -> "CycloScalar":
        """Build an element from power-basis coefficients (any length; reduced mod Phi_n)."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in fr]
        return CycloScalar._make(self, self._reduce_long(nums), den)

    def _reduce_long(self, nums):
        phi = self.phi
        res = list(nums[:phi]) + [0] * max(0, phi - len(nums))
        table = self._power_table
        for k in range(phi, len(nums)):
            c = nums[k]
            if c:
                # table covers every k < n, and z^k = z^(k mod n)
                t = table[k] if k < len(table) else table[k % self.n]
                for i in range(phi):
                    if t[i]:
                        res[i] += c * t[i]
        return res


_FIELDS: dict[int, CyclotomicField] = {}
_FIELDS_LOCK = threading.Lock()


def field(n: int) -> CyclotomicField:
    """Return the shared :class:`CyclotomicField` for order ``n``."""
    f = _FIELDS.get(n)
    if f is None:
        with _FIELDS_LOCK:
            f = _FIELDS.get(n)
            if f is None:
                f = CyclotomicField(n)
                _FIELDS[n] = f
    return f


class CycloScalar:
    """An exact element of Q(z_n).

    ``coeffs`` exposes the canonical power-basis coefficients as Fractions;
    arithmetic operators implement the field operations and accept plain
    ints and Fractions as the other operand.
    """

    __slots__ = ("field", "_num", "_den", "_hash")

    def __init__(self, order: int, coeffs):
        f = field(order)
        other = f.from_coeffs(coeffs)
        self.field = f
        self._num = other._num
        self._den = other._den
        self._hash = None

    @classmethod
    def _raw(cls, f, num, den):
        obj = object.__new__(cls)
        obj.field = f
        obj._num = num
        obj._den = den
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, f, num, den):
        if den != 1:
            g = gcd(den, *num)
            if g != 1:
                num = [x // g for x in num]
                den //= g
        if not any(num):
            return f.zero
        return cls._raw(f, tuple(num), den)

    # -- accessors -----------------------------------------------------------

    @property
    def order(self) -> int:
        return self.field.n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return any(self._num)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloScalar):
            if other.field is not self.field:
                raise IncompatibleOrderError(
                    f"orders differ: {self.field.n} vs {other.field.n}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not any(o._num):
            return self
        if not any(self._num):
            return o
        if self._den == o._den:
            return CycloScalar._make(
                self.field, [x + y for x, y in zip(self._num, o._num)], self._den
            )
        da, db = self._den, o._den
        return CycloScalar._make(
            self.field, [x * db + y * da for x, y in zip(self._num, o._num)], da * db
        )

    __radd__ = __add__

    def __neg__(self):
        if not any(self._num):
            return self
        return CycloScalar._raw(self.field, tuple(-x for x in self._num), self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._num, o._num
        f = self.field
        phi = f.phi
        if phi == 1:
            return CycloScalar._make(f, [a[0] * b[0]], self._den * o._den)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        res = conv[:phi]
        table = f._power_table
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                t = table[k]
                for i in range(phi):
                    ti = t[i]
                    if ti:
                        res[i] += c * ti
        return CycloScalar._make(f, res, self._den * o._den)

    __rmul__ = __mul__

    def inv(self) -> "CycloScalar":
        """Multiplicative inverse via the extended Euclidean algorithm over Q[x]."""
        if not any(self._num):
            raise ZeroDivisorError("inverse of zero")
        f = self.field
        # invariant: s*self + t*Phi = r (we only track s)
        r0, r1 = list(f.modulus), _trim(self._num)
        s0, s1 = [], [Fraction(1)]
        while len(_trim(r1)) > 1:
            q, r = _poly_divmod_q(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub_q(s0, _poly_mul_q(q, s1))
        c = Fraction(_trim(r1)[0])
        # self = num/den, so inverse of self is den * s1 / c
        coeffs = [x * self._den / c for x in s1]
        return f.from_coeffs(coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not any(o._num):
            raise ZeroDivisorError("division by zero in cyclotomic field")
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycloScalar):
            return (
                self.field is other.field
                and self._den == other._den
                and self._num == other._num
            )
        if isinstance(other, (int, Fraction)):
            return self == self.field.scalar(other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.field.n, self._num, self._den))
            self._hash = h
        return h

    def __reduce__(self):
        return (_rebuild, (self.field.n, self._num, self._den))

    # -- text form -------------------------------------------------------------

    def to_text(self, var: str = "z") -> str:
        """Exact text form, highest power first, e.g. ``3/2*z^2 - 1/5``."""
        parts = []
        for k in range(len(self._num) - 1, -1, -1):
            c = Fraction(self._num[k], self._den)
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"CycloScalar({self.order}, '{self.to_text()}')"


def _rebuild(n, num, den):
    return CycloScalar._raw(field(n), tuple(num), den)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<v1>[A-Za-z])(?:\^(?P<e1>\d+))?)?
        | (?P<v2>[A-Za-z])(?:\^(?P<e2>\d+))?
        )\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str, n: int, var: str = "z") -> CycloScalar:
    """Parse the text form produced by :meth:`CycloScalar.to_text`.

    Powers at or above phi(n) are accepted and reduced modulo Phi_n.
    """
    if not isinstance(text, str):
        raise IngestError(f"scalar must be a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise IngestError("empty scalar text")
    f = field(n)
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise IngestError(f"cannot parse scalar {text!r} at offset {pos}")
        if m.group("sign") is None and not first:
            raise IngestError(f"missing operator in scalar {text!r} at offset {pos}")
        v = m.group("v1") or m.group("v2")
        if v is not None and v != var:
            raise IngestError(f"unknown variable {v!r} in scalar {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        e = m.group("e1") or m.group("e2")
        power = int(e) if e is not None else (1 if v is not None else 0)
        coeffs[power] = coeffs.get(power, Fraction(0)) + coef
        pos = m.end()
        first = False
    if not coeffs:
        return f.zero
    top = max(coeffs)
    dense = [coeffs.get(k, Fraction(0)) for k in range(top + 1)]
    if top >= f.n:
        folded = [Fraction(0)] * f.n
        for k, c in enumerate(dense):
            folded[k % f.n] += c
        dense = folded
    return f.from_coeffs(dense)
