from fractions import Fraction

import numpy as np

import pytest

from equivect.cyclotomic import (
    CycloNum,
    cos_2pi,
    cross,
    cyclo_arith,
    cyclo_eval,
    dot,
    golden_ratio,
    sin_2pi,
    span_rank,
    sqrt5,
    vec,
)


def test_roots_of_unity():
    i = CycloNum.root_of_unity(1, 4, 4)
    assert i * i == -1
    assert i.conj() == -i
    z3 = CycloNum.root_of_unity(1, 3, 12)
    assert 1 + z3 + z3 * z3 == 0
    assert z3 ** 3 == 1
    assert z3 ** -1 == z3.conj()


def test_trigonometric_values():
    assert cos_2pi(1, 6, 12) == Fraction(1, 2)
    assert sin_2pi(1, 4, 4) == 1
    assert cos_2pi(1, 4, 4) == 0
    c, s = cos_2pi(1, 5, 20), sin_2pi(1, 5, 20)
    assert c * c + s * s == 1
    assert abs(c.to_complex() - 0.30901699437494745) < 1e-12


def test_golden_ratio():
    phi = golden_ratio(20)
    assert phi * phi == phi + 1
    assert sqrt5() ** 2 == 5
    assert phi.is_real()
    assert not phi.is_rational()


def test_promote_and_demote():
    i = CycloNum.root_of_unity(1, 4, 4)
    big = i.promote(20)
    assert big == i
    assert big.demote(4).coeffs == i.coeffs
    with pytest.raises(ValueError):
        CycloNum.root_of_unity(1, 5, 20).demote(4)


def test_division():
    a = CycloNum.root_of_unity(1, 5, 5) + 2
    assert (a / a) == 1
    assert a * a.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        CycloNum.zero(5).inverse()


def test_hash_matches_rational():
    assert hash(CycloNum.rational(3, 12)) == hash(CycloNum.rational(3, 5))
    assert len({CycloNum.rational(3, 12), CycloNum.rational(3, 5)}) == 1


def test_json_round_trip_preserves_value():
    x = golden_ratio(20) - CycloNum.root_of_unity(1, 4, 20)
    assert CycloNum.from_json(x.to_json()) == x


def test_vectors():
    e1, e2, e3 = vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)
    assert cross(e1, e2) == e3
    assert dot(e1, e2) == 0
    assert span_rank([e1, e2, vec(1, 1, 0)]) == 2
    assert span_rank([e1, vec(-2, 0, 0)]) == 1


def test_dispatch_form():
    z = CycloNum.root_of_unity(1, 5, 5)
    w = z * z
    assert cyclo_arith(z, w, "mul") == z ** 3
    assert cyclo_arith(z, w, "div") == z.conj()
    assert cyclo_arith(z, w, "sub") == z - w
    assert cyclo_arith(z, w, "conj") == z ** 4
    assert cyclo_arith(z, z.conj().conj(), "eq") is True
    assert abs(cyclo_eval(cyclo_arith(z, z.conj(), "add")) - 2 * np.cos(2 * np.pi / 5)) < 1e-12
    with pytest.raises(ValueError):
        cyclo_arith(z, w, "pow")


def test_hash_ignores_the_ambient_field():
    i4 = CycloNum.root_of_unity(1, 4, 4)
    i8 = CycloNum.root_of_unity(2, 8, 8)
    assert i4 == i8
    assert hash(i4) == hash(i8)
    assert hash(CycloNum.root_of_unity(1, 3, 3)) == hash(CycloNum.root_of_unity(4, 12, 60))
    assert hash(CycloNum.rational(Fraction(1, 2), 20)) == hash(Fraction(1, 2))
    assert len({i4, i8, CycloNum.root_of_unity(3, 12, 24)}) == 1
    assert i8.minimal().conductor == 4
    assert CycloNum.zeta(1, 8).minimal().conductor == 8
