"""The standard Hermitian model and basis adaptation."""

from fractions import Fraction

import numpy as np
import pytest

from hermcurv.model import (
    DimensionTooSmall,
    NotComplexStructure,
    NotCompatible,
    NotPositiveDefinite,
    canonicalize,
    kaehler_form,
    random_unitary,
    standard_model,
)


def test_j_squares_to_minus_identity():
    for n in (2, 3, 4):
        j = standard_model(n).j_matrix
        assert np.array_equal(j @ j, -np.eye(2 * n, dtype=np.int64))


def test_j_is_antisymmetric():
    j = standard_model(3).j_matrix
    assert np.array_equal(j.T, -j)


def test_index_helpers_and_labels():
    m = standard_model(3)
    assert m.dim == 6
    assert [m.x(i) for i in range(3)] == [0, 1, 2]
    assert [m.y(i) for i in range(3)] == [3, 4, 5]
    assert m.axis_label(0) == "x1"
    assert m.axis_label(3) == "y1"
    assert m.axis_label(5) == "y3"
    with pytest.raises(IndexError):
        m.x(3)
    with pytest.raises(IndexError):
        m.y(-1)


def test_j_perm_sign_reconstructs_matrix():
    m = standard_model(2)
    rebuilt = np.zeros((4, 4), dtype=np.int64)
    for i in range(4):
        rebuilt[m.j_perm[i], i] = m.j_sign[i]
    assert np.array_equal(rebuilt, m.j_matrix)


def test_standard_model_is_cached():
    assert standard_model(2) is standard_model(2)


def test_too_small_dimension():
    with pytest.raises(DimensionTooSmall):
        standard_model(1)


def test_kaehler_form_values():
    m = standard_model(2)
    omega = kaehler_form(m)
    # Omega(x, y) = <x, J y>: Omega(x1, y1) = <x1, -x1> = -1
    assert omega[0, 2] == -1
    assert omega[2, 0] == 1
    assert np.array_equal(omega.T, -omega)
    assert np.array_equal(omega @ omega, -np.eye(4, dtype=np.int64))


def test_random_unitary_properties():
    m = standard_model(3)
    u = random_unitary(m, seed=5)
    assert np.allclose(u.T @ u, np.eye(6), atol=1e-12)
    jf = m.j_matrix.astype(float)
    assert np.allclose(u @ jf, jf @ u, atol=1e-12)


def test_random_unitary_deterministic_per_seed():
    m = standard_model(2)
    assert np.array_equal(random_unitary(m, seed=9), random_unitary(m, seed=9))
    assert not np.array_equal(random_unitary(m, seed=9), random_unitary(m, seed=10))


def _standard_j(n: int) -> np.ndarray:
    return standard_model(n).j_matrix.astype(object)


def test_canonicalize_exact_square_norms():
    g = np.diag([4, 9, 4, 9]).astype(object)
    j = _standard_j(2)
    model, c = canonicalize(g, j)
    assert model.n == 2
    assert all(isinstance(x, Fraction) for x in c.flat)
    eye = np.eye(4, dtype=np.int64).astype(object)
    assert np.all(c.T @ g @ c == eye)
    assert np.all(j @ c == c @ _standard_j(2))


def test_canonicalize_falls_back_to_float_for_irrational_norms():
    g = np.diag([2, 3, 2, 3]).astype(object)
    model, c = canonicalize(g, _standard_j(2))
    assert c.dtype.kind == "f"
    assert np.allclose(c.T @ g.astype(float) @ c, np.eye(4), atol=1e-12)


def test_canonicalize_float_random_compatible_metric():
    rng = np.random.default_rng(17)
    n = 3
    j = standard_model(n).j_matrix.astype(float)
    m = rng.standard_normal((2 * n, 2 * n))
    base = m.T @ m + 2 * n * np.eye(2 * n)
    g = base + j.T @ base @ j
    model, c = canonicalize(g, j)
    assert model.n == n
    assert np.allclose(c.T @ g @ c, np.eye(2 * n), atol=1e-8)
    assert np.allclose(j @ c, c @ standard_model(n).j_matrix.astype(float), atol=1e-8)


def test_canonicalize_rejects_indefinite_gram():
    g = np.diag([1, -1, 1, -1]).astype(object)
    with pytest.raises(NotPositiveDefinite):
        canonicalize(g, _standard_j(2))


def test_canonicalize_rejects_bad_complex_structure():
    g = np.eye(4, dtype=np.int64).astype(object)
    j = np.eye(4, dtype=np.int64).astype(object)
    with pytest.raises(NotComplexStructure):
        canonicalize(g, j)


def test_canonicalize_rejects_incompatible_gram():
    g = np.diag([1, 2, 3, 4]).astype(object)  # not J-invariant
    with pytest.raises(NotCompatible):
        canonicalize(g, _standard_j(2))


def test_canonicalize_rejects_tiny_dimension():
    with pytest.raises(DimensionTooSmall):
        canonicalize(np.eye(2, dtype=np.int64).astype(object),
                     np.array([[0, -1], [1, 0]], dtype=object))
