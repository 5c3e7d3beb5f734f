import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genramsey.finite_field import (
    FieldDomainError,
    FieldElement,
    FieldSpec,
    all_elements,
    field,
    inject_alphabet,
    prime_power,
    smallest_field_for,
)
from oracles import ref_add, ref_mul

ORDERS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2)]


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(6) is None
    assert prime_power(1) is None


def test_default_moduli():
    assert field(2, 2).modulus == (1, 1, 1)  # x^2 + x + 1
    assert field(2, 3).modulus == (1, 1, 0, 1)  # x^3 + x + 1
    assert field(3, 2).modulus == (1, 0, 1)  # x^2 + 1


@pytest.mark.parametrize("p,k", ORDERS)
def test_tables_match_schoolbook_arithmetic(p, k):
    F = field(p, k)
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.mul(a, b) == ref_mul(a, b, p, k, F.modulus)
        assert F.add(a, b) == ref_add(a, b, p, k)


@pytest.mark.parametrize("p,k", ORDERS)
def test_vectorized_matches_scalar(p, k):
    F = field(p, k)
    a, b = np.meshgrid(np.arange(F.q), np.arange(F.q))
    assert (F.vmul(a, b) == np.vectorize(F.mul)(a, b)).all()
    assert (F.vadd(a, b) == np.vectorize(F.add)(a, b)).all()
    assert (F.vsub(a, b) == np.vectorize(F.sub)(a, b)).all()
    assert (F.vpow(np.arange(F.q), F.q - 1) == [0] + [1] * (F.q - 1)).all()


def test_fermat_on_every_element():
    for p, k in ORDERS:
        F = field(p, k)
        for x in all_elements(F):
            assert x ** F.q == x


def test_inverse_and_domain_error():
    F = field(3, 2)
    for x in all_elements(F)[1:]:
        assert x * x.inv() == F.one
    with pytest.raises(FieldDomainError):
        F.zero.inv()


def test_integer_conversion_is_prime_subfield():
    F = field(2, 2)
    assert F(2) == F.zero  # 2 = 1 + 1 = 0 in characteristic 2
    x = F([0, 1])
    assert x == F.element(2)
    assert x * x == x + F.one  # x^2 = x + 1


def test_json_roundtrip():
    F = field(3, 2)
    assert FieldSpec.from_json(F.to_json()) == F
    G = FieldSpec.from_json({"p": 3, "k": 2, "modulus": [2, 2, 1]})
    assert G != F and G.q == 9
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2 over GF(2)


def test_smallest_field_and_injection():
    assert smallest_field_for(2).q == 2
    assert smallest_field_for(6).q == 7
    assert smallest_field_for(9).q == 9
    F = field(2, 2)
    inj = inject_alphabet(["r", "g", "b"], F)
    assert [inj[c].code for c in "rgb"] == [0, 1, 2]
    with pytest.raises(ValueError):
        inject_alphabet(list("abcde"), F)


def test_elements_from_different_fields_do_not_mix():
    with pytest.raises(ValueError):
        field(2).one + field(3).one


def test_large_field_builds():
    F = field(2, 16)
    assert F.q == 65536
    g = F.element(F.generator)
    assert g ** (F.q - 1) == F.one


field_and_elems = st.sampled_from(ORDERS).flatmap(
    lambda pk: st.tuples(st.just(field(*pk)), *[st.integers(0, pk[0] ** pk[1] - 1)] * 3)
)


@settings(max_examples=200, deadline=None)
@given(field_and_elems)
def test_field_axioms(data):
    F, a, b, c = data
    A, B, C = (F.element(v) for v in (a, b, c))
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A + B == B + A and A * B == B * A
    assert A - A == F.zero
    if b:
        assert (A / B) * B == A
