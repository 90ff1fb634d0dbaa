import pytest
from hypothesis import given, strategies as st

from taft_depth.double import (
    DoubleElement,
    Monomial,
    build_Rplus_D,
    monomial_index,
    multiply,
    normalize_word,
    quotient_module_from_double,
    right_multiply_generator,
)
from taft_depth.errors import DomainError
from taft_depth.qarith import field, q_int, subspace_quotient
from taft_depth.taftmod import module_of_Q_direct


def gen(name, n):
    return DoubleElement.generator(name, n)


def mono(i, j, r, s, n):
    return DoubleElement.monomial(i, j, r, s, n)


def E(n, terms):
    return DoubleElement(n, {Monomial(*k): v for k, v in terms.items()})


@st.composite
def monomial_triples(draw, max_n=4):
    n = draw(st.integers(2, max_n))
    e = st.integers(0, n - 1)
    ms = [mono(draw(e), draw(e), draw(e), draw(e), n) for _ in range(3)]
    return (n, *ms)


# -- rewriting -----------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_defining_relations(n):
    f = field(n)
    a, b, c, d = (gen(x, n) for x in "abcd")
    one = DoubleElement.one(n)
    assert d * a == E(n, {(1, 0, 0, 1): f.q, (0, 0, 0, 0): 1, (0, 1, 1, 0): -1})
    assert b * a == E(n, {(1, 1, 0, 0): f.q})
    assert c * a == (a * c).scale(f.q)
    assert c * b == b * c
    assert d * b == (b * d).scale(f.q)
    assert d * c == (c * d).scale(f.q)
    assert d * a - (a * d).scale(f.q) == one - b * c
    for x in (a, b, c, d, d * a):
        assert one * x == x == x * one


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_power_truncation(n):
    one = DoubleElement.one(n)
    for g, want in (("a", DoubleElement(n)), ("d", DoubleElement(n)), ("b", one), ("c", one)):
        x = one
        for _ in range(n):
            x = x * gen(g, n)
        assert x == want


@given(monomial_triples())
def test_associativity(data):
    n, x, y, z = data
    assert (x * y) * z == x * (y * z)


@given(monomial_triples(max_n=5))
def test_normal_form_is_stable(data):
    n, x, y, _ = data
    prod = x * y
    for m, v in prod.terms.items():
        assert all(0 <= e < n for e in m)
        assert normalize_word(m.word(), n) == {m: field(n).one}
    assert prod * DoubleElement.one(n) == prod


def _hand_times_a(m, n):
    """m * a from the closed form obtained by pushing a leftwards past d^s, c^r, b^j."""
    f = field(n)
    i, j, r, s = m
    out = {}

    def add(key, v):
        if key[0] >= n:
            return
        key = (key[0], key[1] % n, key[2] % n, key[3])
        out[key] = out.get(key, f.zero) + v

    add((i + 1, j, r, s), f.q_pow(j + r + s))
    if s:
        add((i, j, r, s - 1), q_int(s, n))
        add((i, j + 1, r + 1, s - 1), -f.q_pow(s - 1) * q_int(s, n))
    return E(n, out)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_right_multiplication_by_a_against_closed_form(n):
    for i in range(n):
        for j in range(n):
            for r in range(n):
                for s in range(n):
                    m = Monomial(i, j, r, s)
                    x = mono(*m, n)
                    assert right_multiply_generator(x, "a") == _hand_times_a(m, n), m


@given(monomial_triples(max_n=4), st.sampled_from("abcd"))
def test_right_multiply_generator_matches_multiply(data, g):
    n, x, y, _ = data
    x = x + y.scale(field(n).q)
    assert right_multiply_generator(x, g) == multiply(x, gen(g, n))


def test_right_multiply_examples():
    n = 4
    f = field(n)
    for i in range(n):
        assert right_multiply_generator(mono(0, 0, i, 0, n), "b") == mono(0, 1, i, 0, n)
    assert right_multiply_generator(gen("d", n), "a") == E(
        n, {(1, 0, 0, 1): f.q, (0, 0, 0, 0): 1, (0, 1, 1, 0): -1}
    )
    assert not right_multiply_generator(mono(n - 1, 0, 0, 0, n), "a")
    with pytest.raises(DomainError):
        right_multiply_generator(gen("a", n), "x")


def test_element_errors_and_text():
    with pytest.raises(DomainError):
        mono(3, 0, 0, 0, 3)
    with pytest.raises(DomainError):
        gen("e", 3)
    with pytest.raises(DomainError):
        multiply(gen("a", 2), gen("a", 3))
    f = field(5)
    x = E(5, {(1, 0, 2, 1): f.q_pow(2), (0, 0, 0, 0): 1})
    assert x.to_text() == "1 * a^0 b^0 c^0 d^0 + q^2 * a^1 b^0 c^2 d^1"
    y = E(5, {(0, 1, 0, 0): f.one + f.q})
    assert y.to_text() == "(q + 1) * a^0 b^1 c^0 d^0"
    assert DoubleElement(3).to_text() == "0"


def test_monomial_index_is_a_bijection():
    n = 3
    idx = {monomial_index(Monomial(i, j, r, s), n) for i in range(n) for j in range(n) for r in range(n) for s in range(n)}
    assert idx == set(range(n**4))


# -- the quotient ------------------------------------------------------------------------


@pytest.mark.parametrize("n,rank", [(2, 12), (3, 72), (4, 240)])
def test_ideal_rank(n, rank):
    span = build_Rplus_D(n)
    assert span.rows == rank == n**4 - n**2
    assert span.cols == n**4


def test_b_and_one_share_a_coset():
    n = 3
    quot = subspace_quotient(n**4, build_Rplus_D(n))
    one = DoubleElement.one(n).coordinates()
    b = gen("b", n).coordinates()
    assert quot.project(one) == quot.project(b)
    assert not any(quot.project(gen("a", n).coordinates()))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_quotient_equals_formula_module(n):
    Q, tags = quotient_module_from_double(n)
    assert tags == [(i, j) for j in range(n) for i in range(n)]
    f = field(n)
    assert Q.B.is_diagonal()
    assert list(Q.B.diagonal_entries()) == [f.q_pow(j) for _, j in tags]
    assert Q == module_of_Q_direct(n)


def test_sweedler_action():
    Q, tags = quotient_module_from_double(2)
    f = field(2)
    cd = [f.zero] * 4
    cd[tags.index((1, 1))] = f.one
    want = [f.zero] * 4
    want[tags.index((1, 0))] = f.one
    want[tags.index((0, 0))] = -f.one
    assert Q.act(cd, "a") == want
