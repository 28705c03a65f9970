import pytest

from equivect.characters import (
    MultiplicityVector,
    character_table,
    check_table,
    chi_orbits,
    chi_stabilizer,
    compare_with_numeric,
    conjugate_character,
    conjugation_permutation,
    is_chi_isotypical,
    restrict_multiplicities,
    restriction_matrix,
    subgroup_table,
)
from equivect.cyclotomic import CycloNum
from equivect.errors import ConsistencyError
from equivect.groups import Subgroup, build_group, cyclic_group, subgroup_generated

A4 = [[1, 2, 0, 3], [1, 0, 3, 2]]
S4 = [[1, 2, 0, 3], [2, 0, 3, 1]]
A5 = [[4, 1, 0, 3, 2], [1, 2, 3, 4, 0]]
Q8 = [[2, 3, 1, 0, 6, 7, 5, 4], [4, 5, 7, 6, 1, 0, 2, 3]]


def dihedral(n):
    rot = list(range(1, n)) + [0]
    flip = [(-k) % n for k in range(n)]
    return build_group([rot, flip])


def test_cyclic_tables():
    for n in range(1, 13):
        table = character_table(cyclic_group(n))
        assert table.degrees == (1,) * n
        assert check_table(table) == []
        assert compare_with_numeric(table) == []


def test_dihedral_tables():
    for n in range(3, 7):
        table = character_table(dihedral(n))
        assert sum(d * d for d in table.degrees) == 2 * n
        assert max(table.degrees) == 2
        assert check_table(table) == []
        assert compare_with_numeric(table) == []


@pytest.mark.parametrize("gens, degrees", [
    (A4, (1, 1, 1, 3)),
    (S4, (1, 1, 2, 3, 3)),
    (A5, (1, 3, 3, 4, 5)),
    (Q8, (1, 1, 1, 1, 2)),
])
def test_named_tables(gens, degrees):
    table = character_table(build_group(gens))
    assert table.degrees == degrees
    assert check_table(table) == []
    assert compare_with_numeric(table) == []


def test_row_order():
    table = character_table(build_group(A5))
    assert table.trivial_row() == 0
    assert all(v == 1 for v in table.chars[0])
    # identity class comes first
    assert [row[0] for row in table.chars] == list(table.degrees)


def test_a5_has_golden_values():
    table = character_table(build_group(A5))
    values = {v.to_complex().real for row in table.chars for v in row}
    phi = (1 + 5 ** 0.5) / 2
    assert any(abs(v - phi) < 1e-12 for v in values)
    assert any(abs(v - (1 - phi)) < 1e-12 for v in values)


def test_restriction_s3_to_z3():
    g = dihedral(3)
    rot = subgroup_generated(g, [g.generators[0]])
    small, emb = subgroup_table(rot)
    r = restriction_matrix(character_table(g), small, emb)
    # trivial and sign restrict to the trivial character, the 2-dim one to the two others
    assert r.tolist() == [[1, 0, 0], [1, 0, 0], [0, 1, 1]]


def test_multiplicity_vector():
    table = character_table(build_group(Q8))
    w = MultiplicityVector(table, (1, 0, 0, 0, 2))
    assert w.dimension == 5
    assert table.decompose(w.character()) == [1, 0, 0, 0, 2]
    with pytest.raises(ConsistencyError):
        MultiplicityVector(table, (1, 0))


def test_decompose_rejects_non_characters():
    table = character_table(cyclic_group(2))
    with pytest.raises(ConsistencyError):
        table.decompose([CycloNum.one(), CycloNum.zero()])


def test_conjugation_action_on_normal_subgroup():
    g = dihedral(3)
    rot = subgroup_generated(g, [g.generators[0]])
    flip = g.generators[1]
    assert conjugation_permutation(g, rot, flip) == (0, 2, 1)
    assert chi_stabilizer(g, rot, 0).order == 6
    assert chi_stabilizer(g, rot, 1).order == 3
    orbits = chi_orbits(g, rot)
    assert [o["size"] for o in orbits] == [1, 2]


def test_isotypical():
    g = build_group(Q8)
    center = subgroup_generated(g, [g.mul(g.generators[0], g.generators[0])])
    h_table, h_emb = subgroup_table(center)
    table = character_table(g)
    two_dim = MultiplicityVector(table, (0, 0, 0, 0, 1))
    linear = MultiplicityVector(table, (0, 1, 0, 0, 0))
    # -1 acts as -I on the two-dimensional irreducible and trivially on the linear ones
    assert is_chi_isotypical(two_dim, h_table, h_emb, 1)
    assert is_chi_isotypical(linear, h_table, h_emb, 0)
    assert not is_chi_isotypical(MultiplicityVector(table, (0, 1, 0, 0, 1)), h_table, h_emb, 0)


def test_restrict_multiplicities():
    g = dihedral(3)
    rot = subgroup_generated(g, [g.generators[0]])
    small, emb = subgroup_table(rot)
    table = character_table(g)
    two_dim = MultiplicityVector(table, (0, 0, 1))
    res = restrict_multiplicities(two_dim, small, emb)
    assert res.mults == (0, 1, 1)
    assert res.dimension == two_dim.dimension


def test_conjugate_character():
    g = dihedral(3)
    rot = subgroup_generated(g, [g.generators[0]])
    flip = g.generators[1]
    assert conjugate_character(g, rot, 1, flip) == 2
    assert conjugate_character(g, rot, 0, flip) == 0
    assert conjugate_character(g, rot, 1, g.generators[0]) == 1
