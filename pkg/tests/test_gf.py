import math

import numpy as np
import pytest

from hypermaps.app.errors import FieldError, UsageError
from hypermaps.app.services.gf import (
    FieldElement,
    FieldSpec,
    Polynomial,
    build_field,
    element_order,
    field_of_order,
    find_modulus,
    fixed_field,
    frobenius,
    is_irreducible,
    prime_factors,
)


def test_prime_factors():
    assert prime_factors(1) == []
    assert prime_factors(360) == [2, 3, 5]
    assert prime_factors(63) == [3, 7]


def test_prime_field_modulus_uses_least_primitive_root():
    spec = field_of_order(7)
    assert spec.modulus == (4, 1)
    assert spec.primitive_code == 3


def test_gf4_root_satisfies_its_modulus():
    spec = field_of_order(4)
    assert spec.modulus == (1, 1, 1)
    t = FieldElement.t(spec)
    one = FieldElement.from_code(spec, 1)
    assert t * t == t + one


def test_gf9_uses_least_primitive_polynomial():
    assert find_modulus(3, 2).coeffs == (2, 1, 1)


def test_field_of_order_rejects_non_prime_powers():
    with pytest.raises(UsageError):
        field_of_order(6)
    with pytest.raises(UsageError):
        field_of_order(1)


def test_fieldspec_rejects_bad_moduli():
    with pytest.raises(UsageError):
        FieldSpec(4, 1, (1, 1))
    with pytest.raises(UsageError):
        FieldSpec(3, 2, (1, 0, 1))  # T^2 + 1 is irreducible over GF(3) but not primitive


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 25])
def test_tables_agree_with_polynomial_arithmetic(q):
    spec = field_of_order(q)
    for a in range(q):
        for b in range(q):
            x = FieldElement.from_code(spec, a)
            y = FieldElement.from_code(spec, b)
            assert (x + y).code == spec.add_table[a, b]
            assert (x * y).code == spec.mul_table[a, b]


@pytest.mark.parametrize("q", [3, 4, 9, 16])
def test_inverses_and_generator_order(q):
    spec = field_of_order(q)
    one = FieldElement.from_code(spec, 1)
    for code in range(1, q):
        a = FieldElement.from_code(spec, code)
        assert a * a.inverse() == one
        assert spec.inv_table[code] == a.inverse().code
    assert element_order(FieldElement.t(spec)) == q - 1


def test_zero_has_no_inverse():
    spec = field_of_order(5)
    with pytest.raises(FieldError):
        FieldElement.from_code(spec, 0).inverse()
    with pytest.raises(FieldError):
        spec.pow_code(0, -1)


def test_mixed_fields_are_rejected():
    a = FieldElement.from_code(field_of_order(4), 1)
    b = FieldElement.from_code(field_of_order(8), 1)
    with pytest.raises(FieldError):
        a + b


def test_frobenius_has_order_k():
    spec = field_of_order(8)
    for code in range(spec.q):
        a = FieldElement.from_code(spec, code)
        assert frobenius(a, 3) == a
        assert frobenius(a, 1) == a ** 2
        assert spec.frob_tables[1][code] == (a ** 2).code


def test_fixed_field_of_quadratic_extension():
    big = build_field(3, 2)
    assert fixed_field(big, 1) == [0, 1, 2]
    assert len(fixed_field(build_field(2, 4), 2)) == 4


def test_polynomial_arithmetic_and_roots():
    spec = field_of_order(5)
    f = Polynomial(spec, (4, 0, 1))  # T^2 - 1
    assert f.roots() == [1, 4]
    assert f == Polynomial.linear(spec, 1) * Polynomial.linear(spec, 4)
    quot, rem = divmod(f, Polynomial.linear(spec, 1))
    assert rem.is_zero()
    assert quot == Polynomial.linear(spec, 4)


def test_irreducibility():
    spec = field_of_order(2)
    assert is_irreducible(Polynomial(spec, (1, 1, 1)))
    assert not is_irreducible(Polynomial(spec, (1, 0, 1)))
    assert is_irreducible(find_modulus(3, 3))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_tables_satisfy_the_field_axioms(q):
    spec = field_of_order(q)
    add, mul = spec.add_table, spec.mul_table
    a, b, c = np.ix_(range(q), range(q), range(q))
    assert (add == add.T).all() and (mul == mul.T).all()
    assert (add[add[a, b], c] == add[a, add[b, c]]).all()
    assert (mul[mul[a, b], c] == mul[a, mul[b, c]]).all()
    assert (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all()
    codes = np.arange(q)
    assert (add[0] == codes).all() and (mul[1] == codes).all()
    assert (add[codes, spec.neg_table] == 0).all()
    assert (mul[codes[1:], spec.inv_table[1:]] == 1).all()


PRIME_POWERS_UP_TO_81 = [
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37,
    41, 43, 47, 49, 53, 59, 61, 64, 67, 71, 73, 79, 81,
]


@pytest.mark.parametrize("q", PRIME_POWERS_UP_TO_81)
def test_units_have_order_dividing_q_minus_one(q):
    spec = field_of_order(q)
    assert all(spec.pow_code(a, q - 1) == 1 for a in range(1, q))
    assert sorted(spec.exp_table.tolist()) == list(range(1, q))


@pytest.mark.parametrize("q", PRIME_POWERS_UP_TO_81)
def test_frobenius_fixed_fields(q):
    spec = field_of_order(q)
    for i in range(spec.k):
        fixed = fixed_field(spec, i)
        assert len(fixed) == spec.p ** math.gcd(i, spec.k)
        assert all(spec.add_table[a, b] in fixed and spec.mul_table[a, b] in fixed for a in fixed for b in fixed)
    assert fixed_field(spec, 1) == [c for c in range(q) if spec.pow_code(c, spec.p) == c]
