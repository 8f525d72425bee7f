"""Exact linear algebra: solvers, kernels, and subspace bookkeeping."""

from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from hermcurv.linalg import (
    AmbientMismatch,
    InconsistentSystem,
    PresolvedSystem,
    SubspaceBasis,
    int_kernel,
    int_row_space,
    min_norm_solve,
    nullspace,
    rank,
    rational_matrix,
    rational_vector,
    solve,
    sparse_nullity,
)


def frac_eq(vec, expected) -> bool:
    return all(a == b for a, b in zip(vec, expected)) and len(vec) == len(expected)


def test_rational_matrix_coerces_ints_and_strings():
    m = rational_matrix([[1, "2/3"], [Fraction(5, 7), 0]])
    assert m[0, 1] == Fraction(2, 3)
    assert m[1, 0] == Fraction(5, 7)
    assert all(isinstance(x, Fraction) for x in m.flat)


def test_rational_matrix_rejects_floats():
    with pytest.raises(TypeError):
        rational_matrix([[0.5]])
    with pytest.raises(ValueError):
        rational_matrix([1, 2, 3])


def test_rational_vector():
    v = rational_vector(["1/2", 3])
    assert frac_eq(v, [Fraction(1, 2), Fraction(3)])


def test_rank_exact_matches_float():
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = rng.integers(-4, 5, size=(6, 9))
        assert rank(m.astype(object)) == rank(m.astype(float))


def test_rank_degenerate_shapes():
    assert rank(np.zeros((0, 5), dtype=object)) == 0
    assert rank(np.zeros((3, 3))) == 0


def test_nullspace_vectors_annihilate():
    m = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=object)
    kern = nullspace(m)
    assert len(kern) == 3 - rank(m)
    for v in kern:
        assert all(x == 0 for x in (m @ v))


def test_nullspace_output_is_primitive_integer():
    kern = nullspace(np.array([[2, 4, 0], [0, 0, 3]], dtype=object))
    assert len(kern) == 1
    v = kern[0]
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    assert g == 1


def test_solve_known_system():
    m = [[2, 1], [1, 3]]
    x = solve(m, [5, 10])
    assert frac_eq(x, [Fraction(1), Fraction(3)])


def test_solve_underdetermined_sets_free_vars_to_zero():
    x = solve([[1, 1, 0]], [7])
    assert frac_eq(x, [Fraction(7), Fraction(0), Fraction(0)])


def test_solve_inconsistent_raises():
    with pytest.raises(InconsistentSystem):
        solve([[1, 2], [2, 4]], [1, 3])


def test_presolved_system_matches_solve():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = rng.integers(-3, 4, size=(5, 7))
        pre = PresolvedSystem(m.astype(object))
        x_free = rng.integers(-3, 4, size=7)
        b = m @ x_free
        x = pre.solve(b.astype(object))
        assert all(u == v for u, v in zip(m.astype(object) @ x, b))


def test_presolved_system_inconsistent_raises():
    pre = PresolvedSystem([[1, 2], [2, 4]])
    pre.solve([1, 2])  # consistent rhs works
    with pytest.raises(InconsistentSystem):
        pre.solve([1, 3])


def test_presolved_system_reuse_across_rhs():
    m = np.array([[1, 0, 1], [0, 1, 1]], dtype=object)
    pre = PresolvedSystem(m)
    for b in ([1, 0], [0, 1], [5, -2]):
        x = pre.solve(b)
        assert all(u == v for u, v in zip(m @ x, rational_vector(b)))


def test_min_norm_solve_solves_and_is_orthogonal_to_kernel():
    m = np.array([[1, 1, 1, 0], [0, 1, -1, 2]], dtype=object)
    b = [4, 2]
    x = min_norm_solve(m, b)
    assert all(u == v for u, v in zip(m @ x, rational_vector(b)))
    for k in int_kernel(m):
        assert sum(a * c for a, c in zip(x, k)) == 0


def test_min_norm_solve_weighted():
    m = np.array([[1, 1]], dtype=object)
    w = [1, 3]
    x = min_norm_solve(m, [4], weights=w)
    assert x[0] + x[1] == 4
    # weighted orthogonality to the kernel direction (1, -1)
    assert Fraction(1) * x[0] - Fraction(3) * x[1] == 0


def test_min_norm_solve_rejects_bad_weights():
    with pytest.raises(ValueError):
        min_norm_solve([[1, 1]], [1], weights=[1, 0])
    with pytest.raises(ValueError):
        min_norm_solve([[1, 1]], [1], weights=[1])


def test_min_norm_solve_inconsistent_raises():
    with pytest.raises(InconsistentSystem):
        min_norm_solve([[1, 1], [1, 1]], [0, 1])


def test_int_kernel_and_row_space_dimensions():
    rng = np.random.default_rng(23)
    for _ in range(10):
        m = rng.integers(-2, 3, size=(4, 6)).astype(object)
        r = rank(m)
        assert len(int_kernel(m)) == 6 - r
        rows = int_row_space(m)
        assert len(rows) == r
        # every original row lies in the span of the echelon rows
        span = SubspaceBasis(6, rows)
        for row in m:
            assert span.contains(row)


def test_int_kernel_of_empty_matrix_is_identity():
    kern = int_kernel(np.zeros((0, 3), dtype=object))
    assert len(kern) == 3


def test_sparse_nullity_matches_dense_rank():
    rng = np.random.default_rng(31)
    for _ in range(10):
        m = rng.integers(-2, 3, size=(5, 8))
        rows = [{j: int(m[i, j]) for j in range(8) if m[i, j]} for i in range(5)]
        assert sparse_nullity(rows, 8) == 8 - rank(m.astype(object))


def test_subspace_basics():
    s = SubspaceBasis(3, [[1, 0, 0], [0, 1, 0]])
    assert s.dim == 2
    assert s.ambient_dim == 3
    assert s.contains([2, -3, 0])
    assert not s.contains([0, 0, 1])
    assert len(s.vectors()) == 2


def test_subspace_empty_contains_only_zero():
    s = SubspaceBasis(3, [])
    assert s.dim == 0
    assert s.contains([0, 0, 0])
    assert not s.contains([1, 0, 0])


def test_subspace_equals_and_union():
    a = SubspaceBasis(3, [[1, 0, 0], [0, 1, 0]])
    b = SubspaceBasis(3, [[1, 1, 0], [1, -1, 0]])
    assert a.equals(b)
    c = SubspaceBasis(3, [[0, 0, 1]])
    u = a.span_union(c)
    assert u.dim == 3
    assert not a.equals(c)


def test_subspace_intersect():
    a = SubspaceBasis(3, [[1, 0, 0], [0, 1, 0]])
    b = SubspaceBasis(3, [[0, 1, 0], [0, 0, 1]])
    i = a.intersect(b)
    assert i.dim == 1
    assert i.contains([0, 5, 0])


def test_subspace_reduced_drops_dependent_spanners():
    s = SubspaceBasis(3, [[1, 0, 0], [2, 0, 0], [0, 1, 0]])
    assert s.dim == 3  # raw spanning count
    assert s.reduced().dim == 2


def test_subspace_ortho_complement_with_weights():
    w = [1, 2, 4]
    whole = SubspaceBasis(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], weights=w)
    line = SubspaceBasis(3, [[1, 1, 0]], weights=w)
    comp = line.ortho_complement_within(whole)
    assert comp.dim == 2
    for v in comp.vectors():
        # weighted pairing with the spanning vector (1, 1, 0)
        assert 1 * v[0] + 2 * v[1] == 0


def test_subspace_ambient_mismatch():
    a = SubspaceBasis(3, [[1, 0, 0]])
    b = SubspaceBasis(4, [[1, 0, 0, 0]])
    with pytest.raises(AmbientMismatch):
        a.equals(b)
    with pytest.raises(AmbientMismatch):
        SubspaceBasis(3, [[1, 0]])
