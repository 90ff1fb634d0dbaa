"""Combinatorial Green ring of the Taft algebra U_n(q).

Indecomposables are labelled M(l, r): l is the length (dimension) 1..n and
r the shift, stored as a residue mod n.  Tensor products follow the rulebook
for U_n(q) (commutativity, tensoring with a simple, with a projective, and
the two ranges l + l' <= n and l + l' > n).  Elements of the positive
quadrant are non-negative integer combinations of labels.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import DomainError, InternalConsistencyError, InvalidOrderError

__all__ = [
    "applicable_rules",
    "rule_formula",
    "GreenElement",
    "IndecLabel",
    "all_labels",
    "depth",
    "depth_chain",
    "green_u_polynomial",
    "indec_set",
    "label",
    "label_from_pj",
    "label_to_pj",
    "quotient_class",
    "rule_case",
    "similar",
    "tensor",
    "tensor_labels",
    "tensor_power",
    "unit",
    "verify_corollary_Q",
]


def _check_order(n):
    if not isinstance(n, int) or n < 2:
        raise InvalidOrderError(f"order must be an integer >= 2, got {n!r}")


@dataclass(frozen=True, order=True)
class IndecLabel:
    """Isoclass M(length, shift) with 1 <= length <= n and shift in 0..n-1."""

    length: int
    shift: int

    def __str__(self):
        return f"M({self.length},{self.shift})"

    def __repr__(self):
        return f"M({self.length},{self.shift})"

    def validate(self, n: int) -> "IndecLabel":
        if not (1 <= self.length <= n) or not (0 <= self.shift < n):
            raise DomainError(f"{self} is not a label for n={n}")
        return self


def label(length: int, shift: int, n: int) -> IndecLabel:
    """M(length, shift) with the shift reduced mod n."""
    _check_order(n)
    if not (1 <= length <= n):
        raise DomainError(f"length {length} outside 1..{n}")
    return IndecLabel(length, shift % n)


def all_labels(n: int) -> list[IndecLabel]:
    _check_order(n)
    return [IndecLabel(l, r) for l in range(1, n + 1) for r in range(n)]


_LABEL_RE = re.compile(r"^\s*M\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def parse_label(text: str, n: int) -> IndecLabel:
    m = _LABEL_RE.match(text)
    if m is None:
        raise DomainError(f"cannot parse label {text!r}; expected M(l,r)")
    return label(int(m.group(1)), int(m.group(2)), n)


def label_from_pj(i: int, r: int, n: int) -> IndecLabel:
    """Label of P_i J^r: length n - r, shift (length - i + 1) mod n."""
    _check_order(n)
    if not (1 <= i <= n) or not (0 <= r <= n - 1):
        raise DomainError(f"P_{i} J^{r} is out of range for n={n}")
    length = n - r
    return IndecLabel(length, (length - i + 1) % n)


def label_to_pj(L: IndecLabel, n: int) -> tuple[int, int]:
    """Inverse of :func:`label_from_pj`: returns (i, r) with i in 1..n (P_{n+1} = P_1)."""
    L.validate(n)
    r = n - L.length
    i = (L.length - L.shift) % n + 1
    return i, r


class GreenElement:
    """A positive-quadrant element: finite map label -> multiplicity >= 1.

    Immutable; supports ``+`` (direct sum) and integer scaling.  Tensor
    products need the order n and go through :func:`tensor`.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[IndecLabel, int] | Iterable[tuple[IndecLabel, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[IndecLabel, int] = {}
        for L, m in items:
            if not isinstance(L, IndecLabel):
                raise TypeError(f"expected IndecLabel, got {type(L).__name__}")
            if not isinstance(m, int) or m < 0:
                raise DomainError(f"multiplicity of {L} must be a non-negative int, got {m!r}")
            if m:
                acc[L] = acc.get(L, 0) + m
        self._terms = dict(sorted(acc.items()))
        self._hash = None

    @classmethod
    def of(cls, *labels: IndecLabel) -> "GreenElement":
        return cls(Counter(labels))

    @property
    def terms(self) -> dict[IndecLabel, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __contains__(self, L):
        return L in self._terms

    def __getitem__(self, L) -> int:
        return self._terms.get(L, 0)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, GreenElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other: "GreenElement") -> "GreenElement":
        if not isinstance(other, GreenElement):
            return NotImplemented
        acc = Counter(self._terms)
        acc.update(other._terms)
        return GreenElement(acc)

    def __mul__(self, k: int) -> "GreenElement":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        return GreenElement({L: m * k for L, m in self._terms.items()})

    __rmul__ = __mul__

    def dim(self) -> int:
        return sum(L.length * m for L, m in self._terms.items())

    def support(self) -> frozenset[IndecLabel]:
        return frozenset(self._terms)

    # -- serialisation ---------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(str(L) if m == 1 else f"{m}*{L}" for L, m in self._terms.items())

    def to_json(self) -> list[dict]:
        return [{"l": L.length, "r": L.shift, "mult": m} for L, m in self._terms.items()]

    @classmethod
    def from_json(cls, data, n: int) -> "GreenElement":
        acc = Counter()
        for entry in data:
            acc[label(int(entry["l"]), int(entry["r"]), n)] += int(entry["mult"])
        return cls(acc)

    @classmethod
    def from_text(cls, text: str, n: int) -> "GreenElement":
        s = text.strip()
        if s == "0":
            return cls()
        acc = Counter()
        for part in s.split("+"):
            part = part.strip()
            mult = 1
            if "*" in part:
                k, part = part.split("*", 1)
                mult = int(k)
            acc[parse_label(part, n)] += mult
        return cls(acc)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GreenElement({self.to_text()})"


def unit(n: int) -> GreenElement:
    """Class of the trivial module M(1, 0)."""
    _check_order(n)
    return GreenElement({IndecLabel(1, 0): 1})


# -- the tensor rulebook -----------------------------------------------------------


def rule_case(L1: IndecLabel, L2: IndecLabel, n: int) -> str:
    """Which rule ('b', 'c', 'd' or 'e') :func:`tensor_labels` dispatches to."""
    l, lp = L1.length, L2.length
    if l == 1 or lp == 1:
        return "b"
    if l == n or lp == n:
        return "c"
    if l + lp <= n:
        return "d"
    return "e"


def applicable_rules(L1: IndecLabel, L2: IndecLabel, n: int) -> list[str]:
    """Every rule among 'b'..'e' whose hypothesis holds for the pair (either order)."""
    l, lp = L1.length, L2.length
    out = []
    if l == 1 or lp == 1:
        out.append("b")
    if (lp == n and l >= 2) or (l == n and lp >= 2):
        out.append("c")
    if l + lp <= n:
        out.append("d")
    if l < n and lp < n and l + lp >= n:
        out.append("e")
    return out


def _rule_terms(rule, L1, L2, n):
    l, r = L1.length, L1.shift
    lp, rp = L2.length, L2.shift
    s = r + rp
    out: Counter = Counter()
    if rule == "b":
        big = l if lp == 1 else lp
        out[IndecLabel(big, s % n)] += 1
    elif rule == "c":
        # the other factor (either one when both are projective) sets the range
        other = l if lp == n else lp
        for i in range(1, other + 1):
            out[IndecLabel(n, (s + i - other) % n)] += 1
    else:
        l0, l1 = min(l, lp), max(l, lp)
        top = l0 if rule == "d" else n - l1
        for i in range(1, top + 1):
            out[IndecLabel(l1 - l0 - 1 + 2 * i, (s + i - l0) % n)] += 1
        if rule == "e":
            for j in range(1, l + lp - n + 1):
                out[IndecLabel(n, (s + 1 - j) % n)] += 1
    return out


def rule_formula(rule: str, L1: IndecLabel, L2: IndecLabel, n: int) -> GreenElement:
    """The right-hand side of one rule, which must be applicable to the pair."""
    _check_order(n)
    L1.validate(n)
    L2.validate(n)
    if rule not in applicable_rules(L1, L2, n):
        raise DomainError(f"rule ({rule}) does not apply to {L1} x {L2} at n={n}")
    return GreenElement(_rule_terms(rule, L1, L2, n))


@lru_cache(maxsize=None)
def _tensor_labels_cached(L1: IndecLabel, L2: IndecLabel, n: int) -> tuple[tuple[IndecLabel, int], ...]:
    return tuple(sorted(_rule_terms(rule_case(L1, L2, n), L1, L2, n).items()))


def tensor_labels(L1: IndecLabel, L2: IndecLabel, n: int) -> GreenElement:
    """Decomposition of M(l, r) (x) M(l', r') by the rulebook."""
    _check_order(n)
    L1.validate(n)
    L2.validate(n)
    return GreenElement(_tensor_labels_cached(L1, L2, n))


def tensor(u: GreenElement, v: GreenElement, n: int) -> GreenElement:
    """Bilinear extension of :func:`tensor_labels`."""
    _check_order(n)
    acc: Counter = Counter()
    for L1, m1 in u.items():
        L1.validate(n)
        for L2, m2 in v.items():
            L2.validate(n)
            k = m1 * m2
            for L, m in _tensor_labels_cached(L1, L2, n):
                acc[L] += k * m
    return GreenElement(acc)


def tensor_power(u: GreenElement, m: int, n: int) -> GreenElement:
    """u^(x m); the zeroth power is the unit."""
    if m < 0:
        raise DomainError("negative tensor power")
    out = unit(n)
    for _ in range(m):
        out = tensor(out, u, n)
    return out


def indec_set(u: GreenElement) -> frozenset[IndecLabel]:
    """Set of indecomposable constituents (support of the multiplicity map)."""
    return u.support()


def similar(u: GreenElement, v: GreenElement) -> bool:
    """u ~ v iff both have the same indecomposable constituents."""
    return indec_set(u) == indec_set(v)


def depth_chain(u: GreenElement, n: int, steps: int) -> list[frozenset[IndecLabel]]:
    """[Indec(p_0(u)), ..., Indec(p_steps(u))] with p_0 = 1 and p_m = u + ... + u^m."""
    _check_order(n)
    chain = [frozenset({IndecLabel(1, 0)})]
    acc: frozenset = frozenset()
    power = unit(n)
    for _ in range(steps):
        power = tensor(power, u, n)
        acc = acc | power.support()
        chain.append(acc)
    return chain


def depth(u: GreenElement, n: int) -> int:
    """Least m with p_m(u) ~ p_(m+1)(u)."""
    _check_order(n)
    if not u:
        raise DomainError("depth of the zero element is undefined")
    cap = n * n + 2
    prev = frozenset({IndecLabel(1, 0)})
    acc: frozenset = frozenset()
    power = unit(n)
    for m in range(cap + 1):
        power = tensor(power, u, n)
        acc = acc | power.support()
        if acc == prev:
            return m
        prev = acc
    raise InternalConsistencyError(f"depth did not stabilise within {cap} steps")


def quotient_class(n: int) -> GreenElement:
    """[Q] = sum_l M(l, l-1) + sum_{l' < n} M(l', n-1)."""
    _check_order(n)
    acc: Counter = Counter()
    for l in range(1, n + 1):
        acc[IndecLabel(l, (l - 1) % n)] += 1
    for lp in range(1, n):
        acc[IndecLabel(lp, n - 1)] += 1
    out = GreenElement(acc)
    if out.dim() != n * n:
        raise InternalConsistencyError(f"[Q] has dimension {out.dim()}, expected {n * n}")
    return out


# -- generators a = [M(1, n-1)], x = [M(2, 0)] -----------------------------------


def _signed_tensor(u: Counter, v: Counter, n: int) -> Counter:
    acc: Counter = Counter()
    for L1, m1 in u.items():
        if not m1:
            continue
        for L2, m2 in v.items():
            if not m2:
                continue
            for L, m in _tensor_labels_cached(L1, L2, n):
                acc[L] += m1 * m2 * m
    return acc


def _signed_u(l: int, n: int) -> Counter:
    a = Counter({IndecLabel(1, n - 1): 1})
    x = Counter({IndecLabel(2, 0): 1})
    prev, cur = None, Counter({IndecLabel(1, 0): 1})
    if l >= 2:
        prev, cur = cur, x
    for _ in range(3, l + 1):
        nxt = _signed_tensor(x, cur, n)
        nxt.subtract(_signed_tensor(a, prev, n))
        prev, cur = cur, nxt
    return cur


def green_u_polynomial(l: int, n: int) -> GreenElement:
    """u_l(a, x) with u_1 = 1, u_2 = x, u_{l+1} = x u_l - a u_{l-1}."""
    _check_order(n)
    if not (1 <= l <= n):
        raise DomainError(f"u_l needs 1 <= l <= {n}, got {l}")
    signed = _signed_u(l, n)
    neg = {L: m for L, m in signed.items() if m < 0}
    if neg:
        raise InternalConsistencyError(f"u_{l} has negative multiplicities {neg}")
    return GreenElement({L: m for L, m in signed.items() if m > 0})


def corollary_rhs(n: int) -> GreenElement:
    """1 + a + sum_{l=2}^{n-1} (a^(n-l+1) + a) u_l + a u_n, expanded in the Green ring."""
    _check_order(n)
    a = GreenElement({IndecLabel(1, n - 1): 1})
    total = unit(n) + a
    for l in range(2, n):
        ul = green_u_polynomial(l, n)
        total = total + tensor(tensor_power(a, n - l + 1, n) + a, ul, n)
    total = total + tensor(a, green_u_polynomial(n, n), n)
    return total


def verify_corollary_Q(n: int) -> bool:
    """True iff the generator expression for [Q] equals :func:`quotient_class`."""
    return corollary_rhs(n) == quotient_class(n)
