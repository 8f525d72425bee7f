"""The ten-component orthogonal decomposition of the curvature space.

Everything is computed in coordinates with respect to a fixed integer basis
of the curvature space built from symmetrized bivector products.  That
basis is orthogonal with squared norms in {4, 8, 16, 48}, so projections
reduce to exact normal equations with a diagonal ambient Gram matrix.

Component subspaces are cut out by exact kernels of the defining operators
(via positive-semidefinite Gram matrices, which keeps all integer matmuls
in int64 range) and by adjoint ranges of the contraction maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .curvature import CurvatureTensor, apply_j, bianchi_sum
from .linalg import (
    PresolvedSystem,
    SubspaceBasis,
    int_kernel,
    int_row_space,
    primitive_rows,
)
from .model import HermitianModel


class TVError(RuntimeError):
    pass


class ComponentAbsent(TVError):
    """The requested component is zero-dimensional at this n."""


COMPONENT_IDS = ("W1", "W2", "W3", "W4", "W5", "W6", "W7", "W8", "W9", "W10")
BLOCK_IDS = ("W1+W4", "W2+W5")
_GRAY_KEY = "gray"

_ALIASES = {
    "W1_PLUS_W4": "W1+W4",
    "W2_PLUS_W5": "W2+W5",
    "W1W4": "W1+W4",
    "W2W5": "W2+W5",
}


def component_key(c: str) -> str:
    key = str(c).strip().upper().replace(" ", "")
    key = _ALIASES.get(key, key)
    if key not in COMPONENT_IDS and key not in BLOCK_IDS:
        raise TVError(f"unknown component {c!r}")
    return key


# ---------------------------------------------------------------------------
# the integer basis of the curvature space

def _bivectors(dim: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(dim) for q in range(p + 1, dim)]


def _product_entries(dim: int, pair1, pair2, coef: int, out: dict) -> None:
    # coef * (omega_{pair1} tensor omega_{pair2}) accumulated entrywise
    (p, q), (r, s) = pair1, pair2
    for i, j, s1 in ((p, q, 1), (q, p, -1)):
        for k, l, s2 in ((r, s, 1), (s, r, -1)):
            flat = ((i * dim + j) * dim + k) * dim + l
            out[flat] = out.get(flat, 0) + coef * s1 * s2


def _sym_product(dim: int, pair1, pair2, coef: int, out: dict) -> None:
    _product_entries(dim, pair1, pair2, coef, out)
    _product_entries(dim, pair2, pair1, coef, out)


class AlgebraBasis:
    """Fixed orthogonal integer basis of the curvature space at one n."""

    def __init__(self, model: HermitianModel):
        dim = model.dim
        elements: list[dict] = []
        for b in _bivectors(dim):
            e: dict = {}
            _product_entries(dim, b, b, 1, e)
            elements.append(e)
        for trip in combinations(range(dim), 3):
            i, j, k = trip
            for pair1, pair2 in (((i, j), (i, k)), ((i, j), (j, k)), ((i, k), (j, k))):
                e = {}
                _sym_product(dim, pair1, pair2, 1, e)
                elements.append(e)
        for quad in combinations(range(dim), 4):
            a, b, c, d = quad
            s1 = ((a, b), (c, d))
            s2 = ((a, c), (b, d))
            s3 = ((a, d), (b, c))
            # the Bianchi sums of the three split products satisfy
            # B(S1) - B(S2) + B(S3) = 0; these two combinations span the kernel
            e = {}
            _sym_product(dim, *s1, 1, e)
            _sym_product(dim, *s2, 1, e)
            elements.append(e)
            e = {}
            _sym_product(dim, *s1, -1, e)
            _sym_product(dim, *s2, 1, e)
            _sym_product(dim, *s3, 2, e)
            elements.append(e)

        self.model = model
        self.dim = len(elements)
        expect = dim * dim * (dim * dim - 1) // 12
        if self.dim != expect:
            raise TVError(f"basis count {self.dim} != {expect}")
        self._idx = [np.array(sorted(e), dtype=np.int64) for e in elements]
        self._val = [
            np.array([e[i] for i in idx], dtype=np.int64)
            for e, idx in zip(elements, self._idx)
        ]
        self.norms = np.array([int((v * v).sum()) for v in self._val], dtype=np.int64)
        flat = np.zeros((self.dim, dim ** 4), dtype=np.int64)
        for r, (idx, val) in enumerate(zip(self._idx, self._val)):
            flat[r, idx] = val
        self.flat_int = flat
        self._flat_float: np.ndarray | None = None

    @property
    def flat_float(self) -> np.ndarray:
        if self._flat_float is None:
            self._flat_float = self.flat_int.astype(np.float64)
        return self._flat_float

    def stack(self) -> np.ndarray:
        dim = self.model.dim
        return self.flat_int.reshape(self.dim, dim, dim, dim, dim)

    def tensor(self, i: int) -> np.ndarray:
        dim = self.model.dim
        return self.flat_int[i].reshape(dim, dim, dim, dim)

    def coords(self, arr: np.ndarray) -> np.ndarray:
        """Coordinates of a curvature-space tensor in this basis."""
        flat = np.asarray(arr).ravel()
        if np.issubdtype(flat.dtype, np.floating):
            return (self.flat_float @ flat) / self.norms
        out = np.empty(self.dim, dtype=object)
        for i, (idx, val) in enumerate(zip(self._idx, self._val)):
            num = sum(int(v) * flat[f] for v, f in zip(val, idx))
            out[i] = Fraction(num, int(self.norms[i]))
        return out

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        dim = self.model.dim
        shape = (dim, dim, dim, dim)
        c = np.asarray(c)
        if np.issubdtype(c.dtype, np.floating):
            return (c @ self.flat_float).reshape(shape)
        flat = np.full(dim ** 4, Fraction(0), dtype=object)
        for ci, idx, val in zip(c, self._idx, self._val):
            if ci:
                flat[idx] = flat[idx] + ci * val
        return flat.reshape(shape)

    def sq_norm_of_coords(self, c: np.ndarray):
        c = np.asarray(c)
        if np.issubdtype(c.dtype, np.floating):
            return float(np.sum(self.norms * c * c))
        return sum(int(w) * x * x for w, x in zip(self.norms, c))


_ALGEBRA_CACHE: dict[int, AlgebraBasis] = {}


def algebra_basis(model: HermitianModel) -> AlgebraBasis:
    if model.n not in _ALGEBRA_CACHE:
        _ALGEBRA_CACHE[model.n] = AlgebraBasis(model)
    return _ALGEBRA_CACHE[model.n]


def build_A_basis(model: HermitianModel) -> SubspaceBasis:
    """The curvature space as a subspace of the full rank-4 tensor space."""
    alg = algebra_basis(model)
    rows = [alg.flat_int[i].astype(object) for i in range(alg.dim)]
    return SubspaceBasis(model.dim ** 4, rows)


# ---------------------------------------------------------------------------
# stacked operator images (axis 0 indexes basis elements)

def _stack_ricci(stack: np.ndarray) -> np.ndarray:
    return np.trace(stack, axis1=1, axis2=4)


def _stack_star_ricci(model: HermitianModel, stack: np.ndarray) -> np.ndarray:
    return np.trace(apply_j(model, stack, (3, 4)), axis1=1, axis2=4)


def _stack_gray(model: HermitianModel, stack: np.ndarray) -> np.ndarray:
    out = stack + apply_j(model, stack, (1, 2, 3, 4))
    for pair in ((1, 2), (3, 4), (1, 3), (2, 4), (1, 4), (2, 3)):
        out = out - apply_j(model, stack, pair)
    return out


def _form_minus_s(model: HermitianModel, f: np.ndarray) -> np.ndarray:
    # 4 * (symmetric J-anti-invariant part)
    s = f + f.transpose(0, 2, 1)
    return s - apply_j(model, s, (1, 2))


def _form_minus_lam(model: HermitianModel, f: np.ndarray) -> np.ndarray:
    # 4 * (antisymmetric J-anti-invariant part)
    a = f - f.transpose(0, 2, 1)
    return a - apply_j(model, a, (1, 2))


def _form_zero_plus_s(model: HermitianModel, f: np.ndarray) -> np.ndarray:
    # 4n * (symmetric J-invariant traceless part)
    s = f + f.transpose(0, 2, 1)
    p = s + apply_j(model, s, (1, 2))
    out = model.n * p
    tr = np.trace(f, axis1=1, axis2=2)
    diag = np.arange(model.dim)
    out[:, diag, diag] -= 2 * tr[:, None]
    return out


def _gram(flat: np.ndarray) -> np.ndarray:
    big = int(np.abs(flat).max(initial=0))
    if big * big * flat.shape[1] >= 2 ** 62:
        raise TVError("integer Gram would overflow int64")
    return flat @ flat.T


def _adjoint_range(image_flat: np.ndarray, norms: np.ndarray) -> list[np.ndarray]:
    """Coordinates spanning the adjoint range of a map given by basis images.

    image_flat[i] is the (flattened) image of basis element i.  The adjoint
    range in coordinates is the column space of image_flat scaled by the
    inverse diagonal Gram.
    """
    rows = int_row_space(image_flat.T)
    if not rows:
        return []
    frac = np.array(
        [[Fraction(int(x), int(w)) for x, w in zip(r, norms)] for r in rows],
        dtype=object,
    )
    return primitive_rows(frac)


# ---------------------------------------------------------------------------
# component construction

@dataclass(eq=False)
class ComponentSet:
    """All component subspaces of the decomposition at one n, in basis coordinates."""

    model: HermitianModel
    algebra: AlgebraBasis
    spaces: dict[str, SubspaceBasis]
    _float_projectors: dict = field(default_factory=dict, repr=False)
    _exact_solvers: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, c: str) -> SubspaceBasis:
        return self.spaces[component_key(c)]

    @property
    def absent(self) -> frozenset:
        return frozenset(k for k in COMPONENT_IDS if self.spaces[k].dim == 0)

    def gray(self) -> SubspaceBasis:
        return self.spaces[_GRAY_KEY]

    def float_projector(self, key: str) -> np.ndarray:
        """Coordinate-space projector matrix for the float path."""
        if key not in self._float_projectors:
            basis = self.spaces[key]
            if basis.dim == 0:
                p = np.zeros((self.algebra.dim, self.algebra.dim))
            else:
                b = basis.matrix().astype(np.float64)
                m = b * self.algebra.norms.astype(np.float64)
                p = b.T @ np.linalg.solve(m @ b.T, m)
            self._float_projectors[key] = p
        return self._float_projectors[key]

    def exact_solver(self, key: str):
        """Cached normal-equation solver (gram, weighted basis) for one component."""
        if key not in self._exact_solvers:
            b = self.spaces[key].matrix()
            m = b * self.algebra.norms.astype(object)
            self._exact_solvers[key] = (PresolvedSystem(m @ b.T), m, b)
        return self._exact_solvers[key]


def _subspace(alg: AlgebraBasis, vectors) -> SubspaceBasis:
    return SubspaceBasis(alg.dim, vectors, weights=alg.norms)


def _invariant_pair_block(model: HermitianModel, alg: AlgebraBasis) -> SubspaceBasis:
    dim = model.dim
    ident = np.eye(dim, dtype=np.int64)
    r0 = np.einsum('ik,jl->ijkl', ident, ident) - np.einsum('il,jk->ijkl', ident, ident)
    jm = model.j_matrix
    t = np.einsum('ik,jl->ijkl', jm, jm) - np.einsum('il,jk->ijkl', jm, jm)
    # project the two-form square onto the Bianchi space (scaled by 3)
    r_om = 3 * t - bianchi_sum(t)
    for tensor in (r0, r_om):
        back = alg.from_coords(alg.coords(tensor))
        if not all(a == b for a, b in zip(back.flat, tensor.flat)):
            raise TVError("invariant tensor does not reconstruct from coordinates")
    rows = primitive_rows(
        np.array([alg.coords(r0), alg.coords(r_om)], dtype=object))
    return _subspace(alg, rows)


def _split_block(block: SubspaceBasis, images, alg: AlgebraBasis):
    """Split an isotypic block into (kernel part, its orthocomplement).

    images[i] is the flattened image of block vector i under the split map.
    """
    mat = np.asarray(images, dtype=object)
    if mat.ndim == 1:
        mat = mat.reshape(-1, 1)
    combos = int_kernel(mat.T)
    vecs = [np.asarray(c @ block.matrix(), dtype=object) for c in combos]
    kern = _subspace(alg, primitive_rows(np.array(vecs, dtype=object)) if vecs else [])
    rest = kern.ortho_complement_within(block)
    return kern, rest


def _build_component_set(model: HermitianModel) -> ComponentSet:
    alg = algebra_basis(model)
    stack = alg.stack()
    dim = model.dim

    ric = _stack_ricci(stack)
    sric = _stack_star_ricci(model, stack)
    jstar = apply_j(model, stack, (1, 2, 3, 4))
    jpair_defect = apply_j(model, stack, (1, 2)) - stack
    w7_defect = apply_j(model, stack, (1,)) - apply_j(model, stack, (3,))
    gray = _stack_gray(model, stack)

    flat = lambda a: a.reshape(alg.dim, -1)
    g_ric = _gram(flat(ric))
    g_sric = _gram(flat(sric))
    g_jfix = _gram(flat(jstar - stack))
    g_janti = _gram(flat(jstar + stack))
    g_jpair = _gram(flat(jpair_defect))
    g_w7 = _gram(flat(w7_defect))
    g_gray = _gram(flat(gray))

    spaces: dict[str, SubspaceBasis] = {}
    spaces["W7"] = _subspace(alg, int_kernel(g_w7))
    spaces["W3"] = _subspace(alg, int_kernel(g_jpair + g_ric))
    spaces[_GRAY_KEY] = _subspace(alg, int_kernel(g_gray))

    if model.n >= 3:
        spaces["W10"] = _subspace(alg, int_kernel(g_janti + g_ric + g_sric))
    else:
        spaces["W10"] = _subspace(alg, [])
    if model.n >= 4:
        pool = _subspace(alg, int_kernel(g_jfix + g_ric + g_sric))
        both = spaces["W3"].span_union(spaces["W7"])
        spaces["W6"] = both.ortho_complement_within(pool)
    else:
        spaces["W6"] = _subspace(alg, [])

    spaces["W8"] = _subspace(alg, _adjoint_range(flat(_form_minus_s(model, ric)), alg.norms))
    spaces["W9"] = _subspace(alg, _adjoint_range(flat(_form_minus_lam(model, sric)), alg.norms))

    block14 = _invariant_pair_block(model, alg)
    spaces["W1+W4"] = block14
    tau_vec = np.trace(ric, axis1=1, axis2=2).astype(object)
    taus = block14.matrix() @ tau_vec
    spaces["W4"], spaces["W1"] = _split_block(block14, taus, alg)

    rho0 = flat(_form_zero_plus_s(model, ric)).astype(object)
    block25 = _subspace(alg, _adjoint_range(flat(_form_zero_plus_s(model, ric)), alg.norms))
    if model.n >= 3:
        star_part = _subspace(
            alg, _adjoint_range(flat(_form_zero_plus_s(model, sric)), alg.norms))
        block25 = block25.span_union(star_part)
    spaces["W2+W5"] = block25
    images25 = block25.matrix() @ rho0
    spaces["W5"], spaces["W2"] = _split_block(block25, images25, alg)

    total = sum(spaces[k].dim for k in COMPONENT_IDS)
    if total != alg.dim:
        raise TVError(f"component dimensions sum to {total}, expected {alg.dim}")
    return ComponentSet(model=model, algebra=alg, spaces=spaces)


_COMPONENT_CACHE: dict[int, ComponentSet] = {}


def build_components(model: HermitianModel) -> ComponentSet:
    if model.n not in _COMPONENT_CACHE:
        _COMPONENT_CACHE[model.n] = _build_component_set(model)
    return _COMPONENT_CACHE[model.n]


# ---------------------------------------------------------------------------
# projections and the decomposition

def _project_coords(cs: ComponentSet, coords: np.ndarray, key: str) -> np.ndarray:
    basis = cs.spaces[key]
    if np.issubdtype(np.asarray(coords).dtype, np.floating):
        return cs.float_projector(key) @ coords
    if basis.dim == 0:
        return np.full(cs.algebra.dim, Fraction(0), dtype=object)
    solver, m, b = cs.exact_solver(key)
    y = solver.solve(m @ coords)
    return y @ b


def project(a: CurvatureTensor, component: str, *, on_absent: str = "raise") -> CurvatureTensor:
    """Orthogonal projection of a curvature tensor onto one component.

    on_absent controls behavior for components that are zero at this n:
    "raise" raises ComponentAbsent, "zero" returns the zero tensor.
    """
    cs = build_components(a.model)
    key = component_key(component)
    if key in COMPONENT_IDS and cs.spaces[key].dim == 0 and on_absent == "raise":
        raise ComponentAbsent(f"{key} is zero at n = {a.model.n}")
    coords = cs.algebra.coords(a.entries)
    out = cs.algebra.from_coords(_project_coords(cs, coords, key))
    return CurvatureTensor(model=a.model, entries=out)


@dataclass(frozen=True, eq=False)
class TVDecomposition:
    """Per-component parts of one curvature tensor, with squared norms."""

    input: CurvatureTensor
    parts: dict
    norms: dict
    absent: frozenset

    def total(self) -> CurvatureTensor:
        out = None
        for key in COMPONENT_IDS:
            out = self.parts[key] if out is None else out + self.parts[key]
        return out

    def residual(self) -> np.ndarray:
        return self.input.entries - self.total().entries


def decompose(a: CurvatureTensor) -> TVDecomposition:
    """Split a curvature tensor into its ten components."""
    cs = build_components(a.model)
    coords = cs.algebra.coords(a.entries)
    parts = {}
    norms = {}
    for key in COMPONENT_IDS:
        c = _project_coords(cs, coords, key)
        parts[key] = CurvatureTensor(model=a.model, entries=cs.algebra.from_coords(c))
        norms[key] = cs.algebra.sq_norm_of_coords(c)
    return TVDecomposition(input=a, parts=parts, norms=norms, absent=cs.absent)


@dataclass(frozen=True)
class DimsTable:
    """Component dimensions at one n, with the completeness checksum."""

    n: int
    rows: tuple
    algebra_dim: int

    @property
    def total(self) -> int:
        return sum(d for _, d in self.rows)

    @property
    def ok(self) -> bool:
        return self.total == self.algebra_dim


def dims_table(model: HermitianModel) -> DimsTable:
    cs = build_components(model)
    rows = tuple((k, cs.spaces[k].dim) for k in COMPONENT_IDS)
    return DimsTable(n=model.n, rows=rows, algebra_dim=cs.algebra.dim)


def gray_subspace(model: HermitianModel) -> SubspaceBasis:
    """Kernel of the Gray combination inside the curvature space (coordinates)."""
    return build_components(model).gray()
