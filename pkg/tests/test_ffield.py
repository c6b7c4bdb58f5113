import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ffsimplex.ffield import (Field, arith, char_table_checksum, field_of_order, is_irreducible, make_field,
                              quadratic_character, sqrt_in_field)


def poly_mulmod(a, b, mod, p):
    """Schoolbook product of little-endian coefficient lists, reduced by a monic modulus."""
    e = len(mod) - 1
    prod = [0] * (2 * e)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * e - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e + 1):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
    return prod[:e]


def test_small_fields_match_known_choices():
    assert field_of_order(9).modulus == (1, 0, 1)  # x^2 + 1
    assert field_of_order(9).nu == 4
    assert field_of_order(5).nu == 2
    assert field_of_order(3).nu == 2


@pytest.mark.parametrize('q', [2, 4, 6, 15, 1])
def test_rejects_bad_orders(q):
    with pytest.raises(ValueError):
        field_of_order(q)


def test_modulus_is_irreducible(fq):
    assert is_irreducible(list(fq.modulus), fq.p)
    assert fq.modulus[-1] == 1 and len(fq.modulus) == fq.e + 1


def test_multiplication_matches_schoolbook(fq):
    mod = list(fq.modulus)
    for a, b in itertools.product(range(fq.q), repeat=2):
        expect = fq.from_coeffs(poly_mulmod(fq.coeffs(a), fq.coeffs(b), mod, fq.p))
        assert fq.mul(a, b) == expect
        assert fq.mul_table[a, b] == expect


def test_tables_agree_with_scalar_ops(fq):
    els = range(fq.q)
    for a in els:
        assert fq.neg_table[a] == fq.neg(a)
        assert fq.chi_table[a] == fq.chi(a)
        if a:
            assert fq.inv_table[a] == fq.inv(a)
            assert fq.mul(a, fq.inv(a)) == 1
        for b in els:
            assert fq.add_table[a, b] == fq.add(a, b)


def test_chi_against_square_table(fq):
    squares = {fq.mul(x, x) for x in range(1, fq.q)}
    assert len(squares) == (fq.q - 1) // 2
    for a in range(fq.q):
        expect = 0 if a == 0 else (1 if a in squares else -1)
        assert quadratic_character(fq, a) == expect


def test_chi_is_multiplicative(fq):
    for a, b in itertools.product(range(fq.q), repeat=2):
        assert fq.chi(fq.mul(a, b)) == fq.chi(a) * fq.chi(b)


def test_sqrt(fq):
    for a in range(fq.q):
        r = sqrt_in_field(fq, a)
        if fq.chi(a) == -1:
            assert r is None
        else:
            assert isinstance(r, int) and fq.mul(r, r) == a


def test_nu_generates_multiplicative_group(fq):
    assert fq.order(fq.nu) == fq.q - 1
    assert sorted(fq.exp_table[:fq.q - 1]) == list(range(1, fq.q))


def test_trace_form_matches_trace(fq):
    T = fq.trace_form
    for a, b in itertools.product(range(fq.q), repeat=2):
        ca, cb = np.array(fq.coeffs(a)), np.array(fq.coeffs(b))
        assert int(ca @ T @ cb) % fq.p == fq.trace(fq.mul(a, b))


def test_arith_and_zero_division():
    f = field_of_order(7)
    assert arith(f, 3, 5, 'add') == 1
    assert arith(f, 3, 5, 'mul') == 1
    assert arith(f, 3, 5, 'sub') == 5
    assert arith(f, 3, 5, 'div') == f.mul(3, f.inv(5))
    with pytest.raises(ZeroDivisionError):
        arith(f, 3, 0, 'div')
    with pytest.raises(ValueError):
        arith(f, 3, 7, 'add')


def test_checksum_stable():
    f = field_of_order(9)
    assert char_table_checksum(f) == char_table_checksum(make_field(3, 2))
    assert char_table_checksum(f) != char_table_checksum(field_of_order(5))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 9, 25, 27, 49, 121, 125]), st.data())
def test_field_axioms(q, data):
    f = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    if a:
        assert f.pow(a, q - 1) == 1
        assert f.pow(a, -1) == f.inv(a)
