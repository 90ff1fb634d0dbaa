"""Cross-checks between the tensor rulebook, explicit modules and the depth claim.

Every check returns a :class:`CheckResult`; failures are collected rather than
raised, except a depth different from 2, which raises TheoremViolation.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable

from .errors import TheoremViolation
from .greenring import (
    GreenElement,
    IndecLabel,
    all_labels,
    depth,
    depth_chain,
    indec_set,
    quotient_class,
    applicable_rules,
    rule_formula,
    similar,
    tensor,
    tensor_labels,
    tensor_power,
    unit,
    verify_corollary_Q,
)
from .qarith import CycloMatrix, q_binomial, rank
from .taftmod import (
    decompose,
    module_of_Q_direct,
    special_basis_vectors,
    standard_module,
    submodule,
    tensor_module,
    u_closed_form,
    w_closed_form,
)

__all__ = [
    "CheckResult",
    "DepthReport",
    "EXPLICIT_QQ_LIMIT",
    "check_a_action_closed_forms",
    "check_basis_full_rank",
    "check_indec_from_basis",
    "check_qbinom_vanishing",
    "crosscheck_tensor_rules",
    "depth_certificate",
    "q_module",
    "run_suite",
    "summarize",
    "verify_decQQ",
    "verify_ksdec",
    "witness_pair",
]

# explicit Q (x) Q has dimension n^4; beyond this it is left to the rulebook
EXPLICIT_QQ_LIMIT = 5


@dataclass
class CheckResult:
    passed: bool
    detail: str = ""

    def to_json(self):
        return {"passed": self.passed, "detail": self.detail}

    def __bool__(self):
        return self.passed


def _workers():
    try:
        cap = int(os.environ.get("TAFT_DEPTH_THREADS", "1"))
    except ValueError:
        cap = 1
    return max(1, min(cap, os.cpu_count() or 1))


def q_module(n: int, construction: str = "formula"):
    """Q built from its action formulas or from the double."""
    if construction == "formula":
        return module_of_Q_direct(n)
    if construction == "double":
        from .double import quotient_module_from_double

        return quotient_module_from_double(n)[0]
    raise ValueError(f"construction must be 'formula' or 'double', got {construction!r}")


@lru_cache(maxsize=8)
def _explicit_QQ(n, rank_method="auto"):
    Q = module_of_Q_direct(n)
    return decompose(tensor_module(Q, Q, check=False), rank_method)


# -- tensor rulebook against explicit modules ------------------------------------------


def _pair_failures(args):
    """Mismatches between explicit decompositions and each applicable rule."""
    n, pairs, rank_method = args
    bad = []
    for L1, L2 in pairs:
        M = tensor_module(standard_module(L1, n), standard_module(L2, n), check=False)
        got = decompose(M, rank_method)
        wants = [("dispatch", tensor_labels(L1, L2, n))]
        wants += [(r, rule_formula(r, L1, L2, n)) for r in applicable_rules(L1, L2, n)]
        for rule, want in wants:
            if got != want:
                bad.append((L1, L2, rule, got.to_text(), want.to_text()))
    return bad


def crosscheck_tensor_rules(
    n: int,
    use_explicit_Q: bool = False,
    sample: int | None = None,
    seed: int = 0,
    rank_method: str = "auto",
) -> dict[str, CheckResult]:
    """Compare decompose(tensor_module(...)) with the rulebook on label pairs.

    All n^4 ordered pairs by default; ``sample`` draws that many pairs instead.
    """
    labels = all_labels(n)
    pairs = [(L1, L2) for L1 in labels for L2 in labels]
    if sample is not None and sample < len(pairs):
        pairs = random.Random(seed).sample(pairs, sample)
    workers = _workers()
    if workers > 1 and len(pairs) > 32:
        chunks = [pairs[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            bad = [b for part in ex.map(_pair_failures, [(n, c, rank_method) for c in chunks]) for b in part]
    else:
        bad = _pair_failures((n, pairs, rank_method))
    out = {}
    nbad = len({(b[0], b[1]) for b in bad})
    detail = f"{len(pairs) - nbad}/{len(pairs)} pairs agree"
    if bad:
        L1, L2, rule, got, want = bad[0]
        detail += f"; first mismatch {L1} x {L2} under rule {rule}: explicit {got}, rule gives {want}"
    out["tensor_pairs"] = CheckResult(not bad, detail)

    noncomm = [
        (L1, L2) for L1, L2 in pairs if tensor_labels(L1, L2, n) != tensor_labels(L2, L1, n)
    ]
    out["tensor_commutes"] = CheckResult(
        not noncomm, "all pairs commute" if not noncomm else f"{noncomm[0]} does not commute"
    )

    seen = {r for L1, L2 in pairs for r in applicable_rules(L1, L2, n)}
    # at n = 2 every pair has a simple or a projective factor
    need = {"b", "c", "d", "e"} if n >= 3 else {"b", "c", "d", "e"} & seen
    missing = sorted(need - seen)
    out["rule_coverage"] = CheckResult(
        not missing, f"rules exercised: {', '.join(sorted(seen))}" + (f"; missing {missing}" if missing else "")
    )

    if use_explicit_Q:
        got = _explicit_QQ(n, rank_method)
        qc = quotient_class(n)
        want = tensor(qc, qc, n)
        out["explicit_QQ"] = CheckResult(
            got == want, f"explicit Q x Q has {len(got)} distinct summands, rulebook {len(want)}"
        )
    return out


# -- Krull-Schmidt decomposition of Q ---------------------------------------------------


def verify_ksdec(n: int, use_double: bool = False) -> CheckResult:
    want = quotient_class(n)
    got = decompose(module_of_Q_direct(n))
    problems = []
    if got != want:
        problems.append(f"decomposition {got} differs from {want}")
    if len(got) != 2 * n - 1:
        problems.append(f"{len(got)} distinct constituents, expected {2 * n - 1}")
    if got.dim() != n * n:
        problems.append(f"total dimension {got.dim()}, expected {n * n}")
    if use_double:
        other = decompose(q_module(n, "double"))
        if other != got:
            problems.append(f"double-built Q decomposes as {other}")
    if problems:
        return CheckResult(False, "; ".join(problems))
    return CheckResult(True, f"Q = {got}")


# -- all indecomposables in Q (x) Q -----------------------------------------------------


def witness_pair(x: int, y: int, n: int) -> tuple[int, IndecLabel, IndecLabel]:
    """(case number, left factor, right factor) whose tensor contains M(x, y)."""
    if y == n - 1 or x == y + 1:
        return 1, IndecLabel(x, y), IndecLabel(1, 0)
    if x == n:
        return 2, IndecLabel(n, n - 1), IndecLabel(n, n - 1)
    if x <= y <= n - 2:
        k, l = n + x - y - 2, n - y - 1
        return 3, IndecLabel(k, n - 1), IndecLabel(l, n - 1)
    if y + 2 <= x <= n - 1:
        k, l = n - y - 2, n + y - x + 1
        return 4, IndecLabel(k, n - 1), IndecLabel(l, l - 1)
    raise AssertionError(f"no case covers M({x},{y}) for n={n}")


def verify_decQQ(n: int, explicit: bool | None = None) -> dict[str, CheckResult]:
    if explicit is None:
        explicit = n <= EXPLICIT_QQ_LIMIT
    everything = frozenset(all_labels(n))
    qc = quotient_class(n)
    qq = tensor(qc, qc, n)
    out = {}
    missing = everything - indec_set(qq)
    out["QQ_green_full"] = CheckResult(not missing, f"{len(indec_set(qq))}/{n * n} labels in Q x Q")
    if explicit:
        got = indec_set(_explicit_QQ(n))
        out["QQ_explicit_full"] = CheckResult(
            got == everything, f"{len(got)}/{n * n} labels in explicit Q x Q"
        )
    summands = qc.support()
    bad = []
    for L in sorted(everything):
        case, W1, W2 = witness_pair(L.length, L.shift, n)
        ok = W1 in summands and W2 in summands and L in tensor_labels(W1, W2, n)
        if ok and explicit:
            M = tensor_module(standard_module(W1, n), standard_module(W2, n), check=False)
            ok = L in decompose(M)
        if not ok:
            bad.append(f"{L} via case {case} ({W1} x {W2})")
    out["QQ_witnesses"] = CheckResult(
        not bad, f"{n * n - len(bad)}/{n * n} witnesses hold" + (f"; failing {bad[:3]}" if bad else "")
    )
    return out


# -- depth ------------------------------------------------------------------------------


@dataclass
class DepthReport:
    n: int
    q_decomposition: GreenElement
    q2_indec_count: int
    q3_indec_count: int
    depth_Q: int
    d_ev: int
    checks: dict[str, CheckResult] = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "checks": {k: self.checks[k].to_json() for k in sorted(self.checks)},
            "d_ev": self.d_ev,
            "depth_Q": self.depth_Q,
            "n": self.n,
            "q2_indec_count": self.q2_indec_count,
            "q3_indec_count": self.q3_indec_count,
            "q_decomposition": self.q_decomposition.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"n               {self.n}",
            f"Q               {self.q_decomposition.to_text()}",
            f"|Indec(Q^2)|    {self.q2_indec_count}",
            f"|Indec(Q^3)|    {self.q3_indec_count}",
            f"depth(Q)        {self.depth_Q}",
            f"d_ev            {self.d_ev}",
        ]
        width = max((len(k) for k in self.checks), default=0)
        for k in sorted(self.checks):
            c = self.checks[k]
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {k.ljust(width)}  {c.detail}")
        return "\n".join(lines)


def depth_certificate(n: int, construction: str = "formula") -> DepthReport:
    """Depth of [Q] in the Green ring, starting from an explicit construction of Q."""
    qdec = decompose(q_module(n, construction))
    checks = {}
    qc = quotient_class(n)
    checks["q_matches_theorem"] = CheckResult(qdec == qc, f"Q = {qdec}")
    q2 = tensor_power(qdec, 2, n)
    q3 = tensor_power(qdec, 3, n)
    chain = depth_chain(qdec, n, 3)
    strict = chain[1] < chain[2] and chain[2] == chain[3]
    checks["depth_chain"] = CheckResult(
        strict, f"|Indec(p_m)| for m = 1, 2, 3: {[len(s) for s in chain[1:]]}"
    )
    checks["Q_not_similar_QQ"] = CheckResult(not similar(qdec, q2), "Q vs Q x Q")
    checks["QQ_similar_QQQ"] = CheckResult(similar(q2, q3), "Q x Q vs Q x Q x Q")
    checks["not_normal"] = CheckResult(not similar(qdec, unit(n)), "Q is not similar to the unit")
    d = depth(qdec, n)
    report = DepthReport(n, qdec, len(indec_set(q2)), len(indec_set(q3)), d, 2 * d + 2, checks)
    checks["depth_is_2"] = CheckResult(d == 2, f"depth {d}, d_ev {2 * d + 2}")
    if d != 2:
        raise TheoremViolation(f"depth of Q is {d} for n={n}, expected 2")
    return report


# -- closed-form checks on the explicit module ------------------------------------------


def check_qbinom_vanishing(n: int, alpha_max: int | None = None) -> CheckResult:
    """(alpha choose beta)_q = 0 for alpha >= n, 1 <= beta <= n-1, alpha - beta < n."""
    top = 3 * n if alpha_max is None else alpha_max
    count = 0
    for alpha in range(n, top + 1):
        for beta in range(1, n):
            if alpha - beta < n:
                count += 1
                if q_binomial(alpha, beta, n):
                    return CheckResult(False, f"({alpha} choose {beta}) is nonzero")
    return CheckResult(True, f"{count} vanishing values")


def _apply_a(Q, vec, r):
    for _ in range(r):
        vec = Q.A.vecmat(vec)
    return vec


def check_a_action_closed_forms(n: int) -> CheckResult:
    Q = module_of_Q_direct(n)
    u, w = special_basis_vectors(n)
    for l in range(1, n + 1):
        targets = [("u", u[l], u_closed_form)]
        if l < n:
            targets.append(("w", w[l], w_closed_form))
        for name, vec, closed in targets:
            cur = vec
            for r in range(l):
                if cur != closed(l, r, n):
                    return CheckResult(False, f"{name}_{l} . a^{r} differs from its closed form")
                if not any(cur):
                    return CheckResult(False, f"{name}_{l} . a^{r} vanishes")
                cur = Q.A.vecmat(cur)
            if any(cur):
                return CheckResult(False, f"{name}_{l} . a^{l} is nonzero")
    return CheckResult(True, "closed forms hold and chains stop at length l")


def _chain_vectors(Q, n):
    u, w = special_basis_vectors(n)
    ublocks = {l: [_apply_a(Q, u[l], r) for r in range(l)] for l in u}
    wblocks = {l: [_apply_a(Q, w[l], r) for r in range(l)] for l in w}
    return ublocks, wblocks


def check_basis_full_rank(n: int) -> CheckResult:
    Q = module_of_Q_direct(n)
    ublocks, wblocks = _chain_vectors(Q, n)
    vecs = [v for blk in ublocks.values() for v in blk] + [v for blk in wblocks.values() for v in blk]
    rk = rank(CycloMatrix.from_rows(n, vecs, n * n))
    return CheckResult(len(vecs) == n * n and rk == n * n, f"{len(vecs)} vectors of rank {rk}")


def check_indec_from_basis(n: int) -> CheckResult:
    Q = module_of_Q_direct(n)
    ublocks, wblocks = _chain_vectors(Q, n)
    for l, vecs in ublocks.items():
        got = decompose(submodule(Q, vecs))
        want = GreenElement({IndecLabel(l, l - 1): 1})
        if got != want:
            return CheckResult(False, f"span of u_{l} chain is {got}, expected {want}")
    for l, vecs in wblocks.items():
        got = decompose(submodule(Q, vecs))
        want = GreenElement({IndecLabel(l, n - 1): 1})
        if got != want:
            return CheckResult(False, f"span of w_{l} chain is {got}, expected {want}")
    return CheckResult(True, f"{len(ublocks) + len(wblocks)} chain submodules identified")


# -- full suite ---------------------------------------------------------------------------


def _sweedler_checks() -> dict[str, CheckResult]:
    from .double import build_Rplus_D, quotient_module_from_double

    n = 2
    out = {}
    Qd, tags = quotient_module_from_double(n)
    names = ["1" if (i, j) == (0, 0) else "c" * i + "d" * j for i, j in tags]
    span = build_Rplus_D(n)
    out["sweedler_basis"] = CheckResult(
        Qd.dim == 4 and sorted(names) == sorted(["1", "c", "d", "cd"]) and span.rows == 12,
        f"dim Q = {Qd.dim}, cosets of {names}",
    )
    want = GreenElement.of(IndecLabel(1, 0), IndecLabel(1, 1), IndecLabel(2, 1))
    out["sweedler_Q"] = CheckResult(decompose(Qd) == want, f"Q = {decompose(Qd)}")
    P2 = standard_module(IndecLabel(2, 1), n)
    pp = decompose(tensor_module(P2, P2))
    want_pp = GreenElement.of(IndecLabel(2, 0), IndecLabel(2, 1))
    out["sweedler_P2P2"] = CheckResult(pp == want_pp, f"P2 x P2 = {pp}")
    return out


def run_suite(n: int, oracle: bool = True, sample: int | None = None) -> dict[str, CheckResult]:
    """All theorem checks for one order; explicit-matrix checks only with ``oracle``."""
    checks: dict[str, CheckResult] = {}
    if n == 2:
        checks.update(_sweedler_checks())
    checks["ksdec"] = verify_ksdec(n, use_double=oracle)
    if oracle:
        from .double import build_Rplus_D

        Qd = q_module(n, "double")
        checks["dual_construction"] = CheckResult(
            Qd == module_of_Q_direct(n), "double-built Q equals formula-built Q entry for entry"
        )
        checks["ideal_dimension"] = CheckResult(
            build_Rplus_D(n).rows == n**4 - n * n, f"dim R+D = {build_Rplus_D(n).rows}"
        )
        checks.update(crosscheck_tensor_rules(n, use_explicit_Q=True, sample=sample))
    checks.update(verify_decQQ(n, explicit=oracle))
    checks["qbinom_vanishing"] = check_qbinom_vanishing(n)
    checks["a_action_closed_forms"] = check_a_action_closed_forms(n)
    checks["basis_full_rank"] = check_basis_full_rank(n)
    checks["indec_from_basis"] = check_indec_from_basis(n)
    checks["q_in_generators"] = CheckResult(verify_corollary_Q(n), "[Q] in generators")
    return checks


def summarize(checks: dict[str, CheckResult]) -> Iterable[str]:
    width = max((len(k) for k in checks), default=0)
    for k in sorted(checks):
        c = checks[k]
        yield f"{'PASS' if c.passed else 'FAIL'}  {k.ljust(width)}  {c.detail}"
