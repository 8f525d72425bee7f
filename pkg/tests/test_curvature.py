"""Curvature tensor type, contractions, defect operators, form splitting."""

from fractions import Fraction

import numpy as np
import pytest

from hermcurv.curvature import (
    CurvatureTensor,
    ShapeMismatch,
    SymmetryViolation,
    apply_j,
    decompose_form,
    gray_defect,
    identity_form,
    j_star,
    max_abs,
    omega_twist,
    pullback,
    ricci,
    star_ricci,
    symmetrize,
    tau,
    tau_star,
    transform_slots,
    w7_defect,
)
from hermcurv.model import kaehler_form, standard_model
from hermcurv.tv import algebra_basis, build_components, decompose


def round_generator(n: int) -> CurvatureTensor:
    """Constant-curvature tensor R[i,j,k,l] = d_il d_jk - d_ik d_jl."""
    model = standard_model(n)
    eye = np.eye(model.dim, dtype=np.int64)
    arr = np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye)
    return CurvatureTensor.from_array(model, arr)


def random_exact_tensor(model, rng) -> CurvatureTensor:
    alg = algebra_basis(model)
    coords = rng.integers(-3, 4, size=alg.dim).astype(object)
    return CurvatureTensor.from_array(model, alg.from_coords(coords))


def test_from_array_validates_symmetries():
    model = standard_model(2)
    bad = np.zeros((4, 4, 4, 4), dtype=np.int64)
    bad[0, 1, 0, 1] = 1  # lacks the antisymmetric partner entries
    with pytest.raises(SymmetryViolation):
        CurvatureTensor.from_array(model, bad)
    with pytest.raises(ShapeMismatch):
        CurvatureTensor.from_array(model, np.zeros((4, 4, 4), dtype=np.int64))


def test_from_array_detects_bianchi_violation():
    model = standard_model(2)
    arr = np.zeros((4, 4, 4, 4), dtype=np.int64)
    # antisymmetric pairs and pair exchange hold, Bianchi fails
    for (i, j, k, l), v in {(0, 1, 2, 3): 1}.items():
        for (a, b, c, d), s in (
            ((i, j, k, l), 1), ((j, i, k, l), -1), ((i, j, l, k), -1),
            ((j, i, l, k), 1),
        ):
            arr[a, b, c, d] += s * v
            arr[c, d, a, b] += s * v
    with pytest.raises(SymmetryViolation, match="Bianchi"):
        CurvatureTensor.from_array(model, arr)


def test_arithmetic_and_mode():
    model = standard_model(2)
    a = round_generator(2)
    b = a + a
    assert max_abs(b.entries - 2 * a.entries) == 0
    assert max_abs((-a).entries + a.entries) == 0
    assert max_abs((a - a).entries) == 0
    assert (Fraction(1, 2) * a).entries[0, 2, 2, 0] == Fraction(1, 2)
    assert a.is_exact
    assert not CurvatureTensor.from_array(model, a.entries.astype(float)).is_exact
    with pytest.raises(ShapeMismatch):
        a + round_generator(3)


def test_symmetrize_matches_basis_projection_oracle():
    # independent oracle: coefficients against the fixed orthogonal basis of
    # the curvature space give the same orthogonal projection
    model = standard_model(2)
    alg = algebra_basis(model)
    rng = np.random.default_rng(42)
    for _ in range(5):
        raw = rng.integers(-5, 6, size=(4, 4, 4, 4)).astype(object)
        via_basis = alg.from_coords(alg.coords(raw))
        direct = symmetrize(model, raw).entries
        assert max_abs(direct - via_basis) == 0


def test_symmetrize_is_identity_on_curvature_tensors():
    rng = np.random.default_rng(7)
    model = standard_model(2)
    a = random_exact_tensor(model, rng)
    assert max_abs(symmetrize(model, a.entries).entries - a.entries) == 0


def test_symmetrize_is_self_adjoint():
    model = standard_model(2)
    rng = np.random.default_rng(13)
    x = rng.integers(-4, 5, size=(4, 4, 4, 4)).astype(object)
    y = rng.integers(-4, 5, size=(4, 4, 4, 4)).astype(object)
    sx = symmetrize(model, x).entries
    sy = symmetrize(model, y).entries
    assert sum((sx * y).flat) == sum((x * sy).flat)


def test_round_generator_contractions():
    for n in (2, 3):
        a = round_generator(n)
        dim = 2 * n
        r = ricci(a)
        assert np.all(r == (dim - 1) * np.eye(dim, dtype=np.int64))
        assert tau(a) == dim * (dim - 1)


def test_round_generator_is_the_invariant_line():
    a = round_generator(2)
    parts = decompose(a)
    live = {k for k, v in parts.norms.items() if v != 0}
    assert live == {"W1"}
    assert parts.norms["W1"] == sum(x * x for x in a.entries.flat)


def test_star_scalar_on_round_generator():
    # rho*(x, y) = A(e_i, x, Jy, Je_i) picks out constant multiples of the
    # metric on the invariant line, and the two traces agree there up to the
    # known factors; pin the computed numbers instead of a formula
    a = round_generator(2)
    sr = star_ricci(a)
    assert np.all(sr == sr.T)
    assert tau_star(a) == np.trace(sr)


def test_pullback_identity_and_composition():
    model = standard_model(2)
    rng = np.random.default_rng(3)
    a = CurvatureTensor.from_array(
        model, random_exact_tensor(model, rng).entries.astype(float))
    eye = np.eye(4)
    assert max_abs(pullback(a, eye).entries - a.entries) == 0
    u = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    v = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    twice = pullback(pullback(a, u), v)
    once = pullback(a, u @ v)
    assert max_abs(twice.entries - once.entries) < 1e-12


def test_j_star_is_an_involution():
    model = standard_model(2)
    rng = np.random.default_rng(29)
    a = random_exact_tensor(model, rng)
    assert max_abs(j_star(j_star(a)).entries - a.entries) == 0
    assert max_abs(j_star(a).entries - pullback(a, model.j_matrix).entries) == 0


def test_apply_j_matches_matrix_substitution():
    model = standard_model(2)
    rng = np.random.default_rng(31)
    arr = rng.integers(-3, 4, size=(4, 4, 4, 4)).astype(object)
    j = model.j_matrix.astype(object)
    expected = np.einsum("ijkl,ka->ijal", arr, j)
    assert max_abs(apply_j(model, arr, (2,)) - expected) == 0


def test_gray_defect_is_linear_and_zero_on_gray_kernel():
    model = standard_model(2)
    cs = build_components(model)
    alg = cs.algebra
    g0 = CurvatureTensor.from_array(model, alg.from_coords(cs.gray().vectors()[0]))
    g1 = CurvatureTensor.from_array(model, alg.from_coords(cs.gray().vectors()[1]))
    assert max_abs(gray_defect(g0)) == 0
    assert max_abs(gray_defect(g0 + 3 * g1)) == 0
    rng = np.random.default_rng(37)
    a = random_exact_tensor(model, rng)
    b = random_exact_tensor(model, rng)
    assert max_abs(gray_defect(a + b) - gray_defect(a) - gray_defect(b)) == 0


def test_gray_defect_scales_obstruction_vectors_by_eight():
    model = standard_model(2)
    cs = build_components(model)
    coords = cs.spaces["W7"].vectors()[0]
    a = CurvatureTensor.from_array(model, cs.algebra.from_coords(coords))
    assert max_abs(gray_defect(a) - 8 * a.entries) == 0


def test_w7_defect_kernel():
    model = standard_model(2)
    cs = build_components(model)
    for coords in cs.spaces["W7"].vectors():
        a = CurvatureTensor.from_array(model, cs.algebra.from_coords(coords))
        assert max_abs(w7_defect(a)) == 0
    assert max_abs(w7_defect(round_generator(2))) != 0


def test_transform_slots_agrees_with_pullback():
    model = standard_model(2)
    rng = np.random.default_rng(41)
    a = random_exact_tensor(model, rng)
    u = model.j_matrix.astype(object)
    assert max_abs(transform_slots(a.entries, u) - pullback(a, u).entries) == 0


def test_omega_twist_values():
    model = standard_model(2)
    omega = kaehler_form(model)
    assert max_abs(omega_twist(model, identity_form(model)) - omega.astype(object)) == 0
    twisted = omega_twist(model, omega.astype(object))
    assert max_abs(twisted + identity_form(model)) == 0


def test_form_decomposition_parts_resum_and_have_symmetries():
    model = standard_model(2)
    rng = np.random.default_rng(43)
    theta = rng.integers(-5, 6, size=(4, 4)).astype(object)
    dec = decompose_form(model, theta)
    assert max_abs(dec.total() - theta) == 0
    for part in (dec.trace_part, dec.sym_plus_traceless, dec.sym_minus):
        assert max_abs(part - part.T) == 0
    for part in (dec.omega_part, dec.alt_plus_traceless, dec.alt_minus):
        assert max_abs(part + part.T) == 0
    for part, sign in (
        (dec.sym_plus_traceless, 1), (dec.sym_minus, -1),
        (dec.alt_plus_traceless, 1), (dec.alt_minus, -1),
    ):
        assert max_abs(apply_j(model, part, (0, 1)) - sign * part) == 0
    assert np.trace(dec.sym_plus_traceless) == 0
    assert sum((dec.alt_plus_traceless * kaehler_form(model)).flat) == 0


def test_form_decomposition_special_inputs():
    model = standard_model(2)
    dec_id = decompose_form(model, identity_form(model))
    assert dec_id.trace_coefficient == 1
    assert max_abs(dec_id.trace_part - identity_form(model)) == 0
    assert max_abs(dec_id.sym_plus_traceless) == 0

    omega = kaehler_form(model).astype(object)
    dec_om = decompose_form(model, omega)
    assert dec_om.omega_coefficient == 1
    assert max_abs(dec_om.omega_part - omega) == 0
    assert max_abs(dec_om.alt_plus_traceless) == 0


def test_form_decomposition_part_ranks():
    # rank of each part as a linear map in the input form equals the
    # dimension of the corresponding invariant subspace of bilinear forms
    for n in (2, 3):
        model = standard_model(n)
        dim = model.dim
        columns = {name: [] for name in (
            "trace", "sym_plus_traceless", "sym_minus",
            "omega", "alt_plus_traceless", "alt_minus")}
        for a in range(dim):
            for b in range(dim):
                e = np.zeros((dim, dim), dtype=np.int64).astype(object)
                e[a, b] = Fraction(1)
                dec = decompose_form(model, e)
                columns["trace"].append(dec.trace_part.ravel())
                columns["sym_plus_traceless"].append(dec.sym_plus_traceless.ravel())
                columns["sym_minus"].append(dec.sym_minus.ravel())
                columns["omega"].append(dec.omega_part.ravel())
                columns["alt_plus_traceless"].append(dec.alt_plus_traceless.ravel())
                columns["alt_minus"].append(dec.alt_minus.ravel())
        expected = {
            "trace": 1,
            "sym_plus_traceless": n * n - 1,
            "sym_minus": n * n + n,
            "omega": 1,
            "alt_plus_traceless": n * n - 1,
            "alt_minus": n * n - n,
        }
        for name, cols in columns.items():
            mat = np.array([[float(x) for x in col] for col in cols])
            got = np.linalg.matrix_rank(mat, tol=1e-9)
            assert got == expected[name], f"n={n} {name}: rank {got}"
        assert sum(expected.values()) == dim * dim


def test_contraction_values_on_handmade_tensor():
    # one bivector square: A = omega_{01} (x) omega_{01}
    model = standard_model(2)
    arr = np.zeros((4, 4, 4, 4), dtype=np.int64)
    for i, j, s1 in ((0, 1, 1), (1, 0, -1)):
        for k, l, s2 in ((0, 1, 1), (1, 0, -1)):
            arr[i, j, k, l] = s1 * s2
    a = CurvatureTensor.from_array(model, arr)
    r = ricci(a)
    assert r[0, 0] == -1 and r[1, 1] == -1
    assert r[2, 2] == 0 and r[3, 3] == 0
    assert tau(a) == -2
    assert max_abs(r - r.T) == 0
