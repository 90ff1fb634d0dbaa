import itertools

import pytest
from hypothesis import given, strategies as st

from taft_depth.errors import DomainError, InvalidOrderError
from taft_depth.greenring import (
    GreenElement,
    IndecLabel,
    all_labels,
    applicable_rules,
    corollary_rhs,
    depth,
    depth_chain,
    green_u_polynomial,
    indec_set,
    label,
    label_from_pj,
    label_to_pj,
    parse_label,
    quotient_class,
    rule_case,
    rule_formula,
    similar,
    tensor,
    tensor_labels,
    tensor_power,
    unit,
    verify_corollary_Q,
)
from taft_depth.taftmod import decompose, standard_module, tensor_module

M = IndecLabel


def G(*pairs):
    return GreenElement({M(l, r): k for l, r, k in pairs})


@st.composite
def label_pairs(draw, max_n=8, count=2):
    n = draw(st.integers(2, max_n))
    labs = [M(draw(st.integers(1, n)), draw(st.integers(0, n - 1))) for _ in range(count)]
    return (n, *labs)


# -- labels -------------------------------------------------------------------------


def test_label_from_pj_examples():
    assert label_from_pj(2, 0, 2) == M(2, 1)
    assert label_from_pj(1, 1, 2) == M(1, 1)
    assert label_from_pj(3, 2, 3) == M(1, 2)


@pytest.mark.parametrize("n", range(2, 9))
def test_label_pj_round_trip(n):
    seen = set()
    for i in range(1, n + 1):
        for r in range(n):
            L = label_from_pj(i, r, n)
            assert label_to_pj(L, n) == (i, r)
            seen.add(L)
    assert seen == set(all_labels(n))


def test_label_errors():
    with pytest.raises(DomainError):
        label_from_pj(0, 0, 3)
    with pytest.raises(DomainError):
        label_from_pj(1, 3, 3)
    with pytest.raises(DomainError):
        label(4, 0, 3)
    with pytest.raises(InvalidOrderError):
        label(1, 0, 1)
    with pytest.raises(DomainError):
        parse_label("N(1,0)", 3)
    assert label(2, -1, 3) == M(2, 2)
    assert parse_label(" M( 2 , 5 ) ", 3) == M(2, 2)


# -- the rulebook ---------------------------------------------------------------------


@given(label_pairs())
def test_rule_b(data):
    n, L, K = data
    one = M(1, K.shift)
    want = G((L.length, (L.shift + K.shift) % n, 1))
    assert tensor_labels(L, one, n) == want
    assert tensor_labels(one, L, n) == want


def test_rulebook_examples():
    assert tensor_labels(M(2, 1), M(2, 1), 2) == G((2, 1, 1), (2, 0, 1))
    assert tensor_labels(M(2, 0), M(2, 0), 3) == G((1, 2, 1), (3, 0, 1))
    # ell + ell' = 4 > 3 puts this pair under rule (e)
    assert rule_case(M(2, 0), M(2, 0), 3) == "e"
    assert rule_case(M(2, 0), M(2, 0), 4) == "d"
    assert rule_case(M(1, 0), M(3, 0), 3) == "b"
    assert rule_case(M(3, 0), M(2, 0), 3) == "c"
    assert rule_case(M(2, 0), M(3, 1), 4) == "e"
    with pytest.raises(DomainError):
        tensor_labels(M(4, 0), M(1, 0), 3)


def test_applicable_rules_and_formulas():
    n = 4
    assert applicable_rules(M(1, 0), M(4, 0), n) == ["b"]
    assert applicable_rules(M(2, 0), M(4, 0), n) == ["c"]
    assert applicable_rules(M(2, 0), M(2, 0), n) == ["d", "e"]
    assert applicable_rules(M(3, 0), M(2, 0), n) == ["e"]
    # boundary cases give the same answer under every applicable rule
    for L1, L2 in itertools.product(all_labels(n), repeat=2):
        want = tensor_labels(L1, L2, n)
        for rule in applicable_rules(L1, L2, n):
            assert rule_formula(rule, L1, L2, n) == want
    with pytest.raises(DomainError):
        rule_formula("d", M(3, 0), M(3, 0), n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rulebook_matches_explicit_modules(n):
    mods = {L: standard_module(L, n) for L in all_labels(n)}
    for L1, L2 in itertools.product(all_labels(n), repeat=2):
        got = decompose(tensor_module(mods[L1], mods[L2]), "exact")
        assert got == tensor_labels(L1, L2, n), (L1, L2)


@pytest.mark.parametrize("n", range(2, 9))
def test_commutative_and_dimension(n):
    for L1, L2 in itertools.product(all_labels(n), repeat=2):
        t = tensor_labels(L1, L2, n)
        assert t == tensor_labels(L2, L1, n)
        assert t.dim() == L1.length * L2.length


@pytest.mark.parametrize("n", range(2, 9))
def test_unit(n):
    e = unit(n)
    for L in all_labels(n):
        assert tensor(G((L.length, L.shift, 1)), e, n) == G((L.length, L.shift, 1))
        assert tensor(e, G((L.length, L.shift, 1)), n) == G((L.length, L.shift, 1))


@given(label_pairs(max_n=6, count=3))
def test_associative(data):
    n, L1, L2, L3 = data
    a, b, c = (GreenElement.of(L) for L in (L1, L2, L3))
    assert tensor(tensor(a, b, n), c, n) == tensor(a, tensor(b, c, n), n)


def test_bilinearity_example():
    L = M(2, 1)
    assert tensor(G((2, 1, 2)), G((1, 0, 3)), 3) == GreenElement({L: 6})


# -- elements -----------------------------------------------------------------------


def test_element_text_and_json():
    u = G((2, 1, 1), (1, 0, 2))
    assert u.to_text() == "2*M(1,0) + M(2,1)"
    assert GreenElement.from_text(u.to_text(), 3) == u
    assert GreenElement.from_json(u.to_json(), 3) == u
    assert u.to_json() == [{"l": 1, "r": 0, "mult": 2}, {"l": 2, "r": 1, "mult": 1}]
    assert GreenElement().to_text() == "0"
    assert GreenElement.from_text("0", 3) == GreenElement()
    with pytest.raises(DomainError):
        GreenElement({M(1, 0): -1})


def test_indec_set_and_similar():
    L = M(2, 1)
    assert indec_set(GreenElement({L: 5})) == {L}
    assert indec_set(GreenElement()) == frozenset()
    assert indec_set(quotient_class(2)) == {M(2, 1), M(1, 0), M(1, 1)}
    u = quotient_class(3)
    assert similar(u, u)
    assert similar(GreenElement({L: 1}), GreenElement({L: 7}))
    assert not similar(quotient_class(2), tensor(quotient_class(2), quotient_class(2), 2))


def test_quotient_class_examples():
    assert quotient_class(2) == G((1, 0, 1), (2, 1, 1), (1, 1, 1))
    assert quotient_class(3) == G((1, 0, 1), (2, 1, 1), (3, 2, 1), (1, 2, 1), (2, 2, 1))
    with pytest.raises(InvalidOrderError):
        quotient_class(1)


@pytest.mark.parametrize("n", range(2, 13))
def test_quotient_class_dimension(n):
    assert quotient_class(n).dim() == n * n


# -- depth ----------------------------------------------------------------------------


def test_depth_examples():
    assert depth(unit(4), 4) == 0
    with pytest.raises(DomainError):
        depth(GreenElement(), 3)


@pytest.mark.parametrize("n", range(2, 9))
def test_depth_of_Q_is_two(n):
    assert depth(quotient_class(n), n) == 2


@pytest.mark.parametrize("n", range(2, 9))
def test_QQ_has_every_label(n):
    Q = quotient_class(n)
    assert indec_set(tensor(Q, Q, n)) == set(all_labels(n))


@pytest.mark.parametrize("n", range(2, 7))
def test_powers_of_Q_grow(n):
    Q = quotient_class(n)
    powers = [tensor_power(Q, m, n) for m in range(1, 6)]
    for lo, hi in zip(powers, powers[1:]):
        assert indec_set(lo) <= indec_set(hi)


@given(label_pairs(max_n=6, count=2), st.integers(1, 3))
def test_depth_stabilises(data, k):
    n, L1, L2 = data
    u = GreenElement({L1: k, L2: 1})
    d = depth(u, n)
    chain = depth_chain(u, n, d + 4)
    assert chain[d] == chain[d + 1]
    assert all(chain[m] == chain[d] for m in range(d, d + 5))
    assert all(chain[m] != chain[m + 1] for m in range(d))


def test_tensor_power_zero_is_unit():
    assert tensor_power(quotient_class(3), 0, 3) == unit(3)


# -- generators ----------------------------------------------------------------------


def test_u_polynomial_examples():
    assert green_u_polynomial(1, 5) == G((1, 0, 1))
    assert green_u_polynomial(2, 5) == G((2, 0, 1))
    assert green_u_polynomial(3, 5) == G((3, 0, 1))
    with pytest.raises(DomainError):
        green_u_polynomial(6, 5)


@pytest.mark.parametrize("n", range(2, 10))
def test_u_polynomial_is_standard_label(n):
    for l in range(1, n + 1):
        assert green_u_polynomial(l, n) == G((l, 0, 1))


@pytest.mark.parametrize("n", range(2, 10))
def test_corollary(n):
    assert verify_corollary_Q(n)
    assert corollary_rhs(n) == quotient_class(n)
