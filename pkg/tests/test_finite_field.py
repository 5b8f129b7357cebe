import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibrecurves.errors import CardinalityError, FieldError, FieldMismatchError, ParseError
from fibrecurves.finite_field import (
    char_table,
    default_modulus,
    element,
    elements,
    field_tables,
    format_field,
    from_index,
    make_field,
    parse_field,
    quad_char,
    smallest_nonsquare,
)
from oracles import ODD_PRIME_POWERS, naive_chi, spec_for

SMALL = [q for q in ODD_PRIME_POWERS if q <= 49]


def test_prime_field_needs_no_modulus():
    F = make_field(17)
    assert F.q == 17 and F.is_prime and F.modulus is None
    assert str(F) == "17"


def test_explicit_modulus_r2_r_1():
    F = make_field(5, 2, [1, 1, 1])
    r = F([0, 1])
    assert (r * r).coeffs == (4, 4)
    assert r * r + r + 1 == 0


def test_reducible_modulus_rejected():
    # x^2 + 1 = (x - 2)(x + 2) over F_5
    with pytest.raises(FieldError):
        make_field(5, 2, [1, 0, 1])


def test_x2_plus_2_is_irreducible_over_f5():
    F = make_field(5, 2, [2, 0, 1])
    assert F.q == 25
    assert all((a * a + 2).index != 0 for a in elements(make_field(5)))


@pytest.mark.parametrize("bad", [(2, 1), (4, 1), (9, 1), (3, 0), (1, 1)])
def test_bad_characteristic_or_degree(bad):
    with pytest.raises(FieldError):
        make_field(*bad)


def test_non_monic_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(5, 2, [2, 0, 3])


def test_cardinality_limit():
    with pytest.raises(CardinalityError):
        make_field(3, 40)


def test_default_modulus_is_smallest_irreducible():
    # c0 is the most significant coordinate; values checked by root search
    assert default_modulus(5, 2) == (1, 1, 1)
    assert default_modulus(13, 2) == (1, 3, 1)
    assert default_modulus(3, 3) == (1, 0, 2, 1)
    for p, n in [(5, 2), (13, 2), (3, 3)]:
        m = default_modulus(p, n)
        assert all(sum(c * x**i for i, c in enumerate(m)) % p for x in range(p))


def test_small_arithmetic():
    F = make_field(5)
    assert F(2) * F(3) == 1
    assert F(1).inverse() == 1
    assert F(2) - F(4) == 3
    assert -F(1) == 4
    assert F(2) ** 4 == 1
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        make_field(5)(1) + make_field(7)(1)


def test_quad_char_examples():
    F = make_field(5)
    assert quad_char(F(0)) == 0
    assert quad_char(F(1)) == 1
    assert quad_char(F(2)) == -1


def test_enumeration():
    assert [e.index for e in elements(make_field(3))] == [0, 1, 2]
    es = list(elements(make_field(5, 2, [1, 1, 1])))
    assert len(es) == 25 and es[0].is_zero()
    assert [e.index for e in es] == list(range(25))


def test_char_table_f5():
    assert char_table(make_field(5)).tolist() == [0, 1, -1, -1, 1]


@pytest.mark.parametrize("q", SMALL)
def test_field_axioms_exhaustive(q):
    F = spec_for(q)
    es = list(elements(F))
    one = F.one()
    for a in es:
        if not a.is_zero():
            assert a * a.inverse() == one
        # Frobenius is additive
        for b in es[:: max(1, q // 7)]:
            assert (a + b) ** F.p == a ** F.p + b ** F.p
            assert a * b == b * a
    # character is multiplicative and balanced
    chi = [quad_char(a) for a in es]
    assert sum(chi) == 0
    for a in es:
        for b in es[:: max(1, q // 7)]:
            assert quad_char(a * b) == quad_char(a) * quad_char(b)


@pytest.mark.parametrize("q", SMALL)
def test_char_table_matches_square_enumeration(q):
    F = spec_for(q)
    assert char_table(F).tolist() == [naive_chi(a) for a in elements(F)]


@pytest.mark.parametrize("q", SMALL)
def test_vector_ops_match_scalar(q):
    F = spec_for(q)
    t = field_tables(F)
    idx = np.arange(q)
    a, b = np.meshgrid(idx, idx)
    a, b = a.ravel(), b.ravel()
    mul = t.mul(a, b)
    add = t.add(a, b)
    sub = t.sub(a, b)
    for i in range(0, len(a), max(1, len(a) // 300)):
        x, y = from_index(F, int(a[i])), from_index(F, int(b[i]))
        assert (x * y).index == mul[i]
        assert (x + y).index == add[i]
        assert (x - y).index == sub[i]
    nz = idx[1:]
    assert (t.mul(nz, t.inv(nz)) == 1).all()


def test_smallest_nonsquare():
    assert smallest_nonsquare(make_field(5)) == 2
    assert smallest_nonsquare(make_field(17)) == 3


@pytest.mark.parametrize("text", ["17", "13^2", "5^2:1,1,1", "3^3"])
def test_parse_format_roundtrip(text):
    F = parse_field(text)
    assert parse_field(format_field(F)) == F


@pytest.mark.parametrize("text", ["", "4", "2^3", "5^2:1,0,1", "x", "5^", "5^2:1,1"])
def test_parse_field_errors(text):
    with pytest.raises((FieldError, ParseError)):
        parse_field(text)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([9, 25, 27, 49, 121]), st.data())
def test_pow_matches_repeated_multiplication(q, data):
    F = spec_for(q)
    a = from_index(F, data.draw(st.integers(0, q - 1)))
    e = data.draw(st.integers(0, 3 * q))
    acc = F.one()
    for _ in range(e):
        acc = acc * a
    assert a**e == acc


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([5, 7, 9, 25, 27, 49, 121, 169]), st.data())
def test_distributivity(q, data):
    F = spec_for(q)
    a, b, c = (from_index(F, data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    if not b.is_zero():
        assert (a / b) * b == a


def test_element_coercion():
    F = make_field(7, 2)
    assert element(F, 9) == element(F, 2)
    with pytest.raises(FieldError):
        element(F, [1, 2, 3])
