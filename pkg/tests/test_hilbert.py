import numpy as np
import pytest

from equivect.errors import HilbertBasisCapError
from equivect.hilbert import combinations_up_to, hilbert_basis, minimalize


def as_tuples(vectors):
    return [tuple(int(x) for x in v) for v in vectors]


def test_sum_equation():
    assert as_tuples(hilbert_basis(np.array([[1, 1, -1]]))) == [(0, 1, 1), (1, 0, 1)]


def test_free_coordinate():
    assert as_tuples(hilbert_basis(np.array([[1, -1, 0]]))) == [(0, 0, 1), (1, 1, 0)]


def test_weighted_equation():
    basis = as_tuples(hilbert_basis(np.array([[2, -1, -1]])))
    assert basis == [(1, 0, 2), (1, 1, 1), (1, 2, 0)]


def test_two_equations():
    # x1 = x2 = x3 + x4
    a = np.array([[1, -1, 0, 0], [1, 0, -1, -1]])
    assert as_tuples(hilbert_basis(a)) == [(1, 1, 0, 1), (1, 1, 1, 0)]


def test_only_zero_solution():
    assert hilbert_basis(np.array([[1, 1]])) == []


def test_no_equations():
    assert as_tuples(hilbert_basis(np.zeros((0, 3), dtype=int))) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_cap():
    with pytest.raises(HilbertBasisCapError):
        hilbert_basis(np.array([[1, -1, 0]]), cap=1)


def test_minimalize():
    vs = [np.array(v) for v in [(2, 1), (1, 1), (0, 3), (1, 2)]]
    assert sorted(as_tuples(minimalize(vs))) == [(0, 3), (1, 1)]


def test_combinations_up_to():
    gens = [np.array([1, 0, 1]), np.array([0, 1, 1])]
    reached = combinations_up_to(gens, np.array([1, 1, 0]), 2)
    assert reached == {(1, 0, 1), (2, 0, 2), (0, 1, 1), (1, 1, 2), (0, 2, 2)}
    assert combinations_up_to([], np.array([1]), 3) == set()
