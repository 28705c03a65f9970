import numpy as np
import pytest

from equivect.errors import ConsistencyError, GroupTooLargeError, InvalidSpecError
from equivect.groups import (
    GroupHom,
    Subgroup,
    build_group,
    check_group_axioms,
    conjugacy_classes,
    cyclic_group,
    direct_product,
    element_order,
    exponent,
    extend_on_generators,
    kernel,
    power_map,
    subgroup_generated,
)

Q8 = [[2, 3, 1, 0, 6, 7, 5, 4], [4, 5, 7, 6, 1, 0, 2, 3]]


def test_closure_orders():
    assert build_group([[1, 2, 0], [0, 2, 1]]).order == 6
    assert build_group([[1, 2, 3, 0], [0, 3, 2, 1]]).order == 8
    assert build_group([[1, 2, 0, 3], [1, 0, 3, 2]]).order == 12
    assert build_group([[1, 2, 0, 3], [2, 0, 3, 1]]).order == 24
    assert build_group([[4, 1, 0, 3, 2], [1, 2, 3, 4, 0]]).order == 60
    assert build_group(Q8).order == 8


def test_cycle_notation_matches_one_line():
    a = build_group([[[0, 1, 2]]])
    b = build_group([[1, 2, 0]])
    assert a.order == b.order == 3
    assert a.element_names == b.element_names


def test_product_convention():
    # (p q)(x) = p(q(x)); identity is index 0
    g = build_group([[1, 0, 2], [0, 2, 1]])
    p, q = g.generators
    pq = g.mul(p, q)
    assert element_order(g, pq) == 3
    assert g.mul(p, p) == g.id_index
    assert g.id_index == 0
    assert g.mul(pq, g.inverse(pq)) == 0


def test_axioms_and_classes():
    for g in (cyclic_group(7), build_group(Q8), build_group([[4, 1, 0, 3, 2], [1, 2, 3, 4, 0]])):
        assert check_group_axioms(g) == []
    assert len(conjugacy_classes(build_group(Q8))) == 5
    a5 = build_group([[4, 1, 0, 3, 2], [1, 2, 3, 4, 0]])
    assert sorted(len(c) for c in conjugacy_classes(a5)) == [1, 12, 12, 15, 20]
    assert exponent(a5) == 30


def test_cap():
    with pytest.raises(GroupTooLargeError):
        build_group([[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], cap=100)


def test_bad_permutation():
    with pytest.raises(InvalidSpecError):
        build_group([[0, 0, 1]])


def test_direct_product_layout():
    z2, z3 = cyclic_group(2), cyclic_group(3)
    p = direct_product(z3, z2)
    assert p.order == 6 and p.is_abelian()
    assert check_group_axioms(p) == []
    # (i, j) is stored at i * 2 + j
    for i in range(3):
        for j in range(2):
            for k in range(3):
                for m in range(2):
                    assert p.mul(2 * i + j, 2 * k + m) == 2 * z3.mul(i, k) + z2.mul(j, m)


def test_subgroups():
    g = build_group([[1, 2, 0], [0, 2, 1]])
    rot = subgroup_generated(g, [g.generators[0]])
    assert rot.order == 3 and rot.is_normal()
    flip = subgroup_generated(g, [g.generators[1]])
    assert flip.order == 2 and not flip.is_normal()
    assert rot.intersection(flip) == Subgroup.trivial(g)
    with pytest.raises(ConsistencyError):
        Subgroup.of(g, [0, g.generators[0]])
    abstract, emb = rot.as_group()
    assert abstract.order == 3
    assert emb.is_homomorphism() and emb.is_injective()


def test_extend_on_generators_and_kernel():
    g = build_group([[1, 2, 0], [0, 2, 1]])
    signs = extend_on_generators(g, [1, -1], lambda a, b: a * b, 1)
    images = tuple(0 if s == 1 else 1 for s in signs)
    hom = GroupHom(g, cyclic_group(2), images)
    assert hom.is_homomorphism()
    assert kernel(hom).order == 3


def test_extend_on_generators_matrices():
    g = cyclic_group(4)
    a = np.array([[0, -1], [1, 0]])
    mats = extend_on_generators(g, [a], lambda x, y: x @ y, np.eye(2, dtype=int))
    assert all(np.array_equal(mats[g.mul(x, y)], mats[x] @ mats[y]) for x in range(4) for y in range(4))


def test_power_map():
    g = cyclic_group(6)
    squares = power_map(g, 2)
    assert sorted(set(squares.tolist())) == sorted({g.power(x, 2) for x in range(6)})
    assert len(set(squares.tolist())) == 3
    assert all(squares[x] == g.mul(x, x) for x in range(6))
    assert power_map(g, 6).tolist() == [g.id_index] * 6
