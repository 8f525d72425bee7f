"""Hermitian metric jets realizing curvature tensors at a point.

The linearization map sends a four-index coefficient tensor (first pair
symmetric and J-invariant, second pair symmetric) to the curvature at the
origin of the quadratic metric it defines.  Realizing a curvature tensor
means inverting that map; the minimum-norm preimage is chosen to make the
output deterministic.  A quadratic holomorphic coordinate change removes
the first-order terms of any jet whose fundamental two-form is closed at
the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curvature import (
    CurvatureTensor,
    apply_j,
    coerce_entries,
    gray_defect,
    is_exact,
    max_abs,
)
from .linalg import InconsistentSystem, PresolvedSystem
from .model import HermitianModel
from .tv import algebra_basis, build_components, decompose, _project_coords


class RealizeError(RuntimeError):
    pass


class InvalidTheta(RealizeError):
    pass


class InvalidJet(RealizeError):
    pass


class FirstJetNonzero(RealizeError):
    pass


class KaehlerConditionFails(RealizeError):
    pass


class NotRealizable(RealizeError):
    """No Hermitian jet has this curvature; carries the obstruction norm."""

    def __init__(self, message: str, w7_sq_norm=None):
        super().__init__(message)
        self.w7_sq_norm = w7_sq_norm


def _permuted(arr: np.ndarray, pattern) -> np.ndarray:
    return np.transpose(arr, np.argsort(pattern))


def _zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape, dtype=np.float64)


def _all_zero(arr: np.ndarray, tol: float = 0.0) -> bool:
    if is_exact(arr):
        return all(x == 0 for x in arr.flat)
    return bool(np.max(np.abs(arr), initial=0.0) <= tol)


def _float_tol(arr: np.ndarray) -> float:
    return 1e-10 * (1.0 + float(np.max(np.abs(arr), initial=0.0)))


# ---------------------------------------------------------------------------
# coefficient tensors and jets

@dataclass(frozen=True, eq=False)
class ThetaTensor:
    """Quadratic metric coefficients: symmetric J-invariant in (i,j), symmetric in (k,l)."""

    model: HermitianModel
    entries: np.ndarray = field(repr=False)

    @classmethod
    def from_array(cls, model: HermitianModel, raw, *, validate: bool = True) -> "ThetaTensor":
        arr = coerce_entries(raw)
        if arr.shape != (model.dim,) * 4:
            raise InvalidTheta(f"expected shape {(model.dim,) * 4}, got {arr.shape}")
        if validate:
            tol = 0.0 if is_exact(arr) else _float_tol(arr)
            if not _all_zero(arr - _permuted(arr, (1, 0, 2, 3)), tol):
                raise InvalidTheta("not symmetric in the first index pair")
            if not _all_zero(arr - _permuted(arr, (0, 1, 3, 2)), tol):
                raise InvalidTheta("not symmetric in the second index pair")
            if not _all_zero(arr - apply_j(model, arr, (0, 1)), tol):
                raise InvalidTheta("first pair is not J-invariant")
        return cls(model=model, entries=arr)

    @property
    def is_exact(self) -> bool:
        return is_exact(self.entries)

    def sq_norm(self):
        return sum(x * x for x in self.entries.flat)


@dataclass(frozen=True, eq=False)
class MetricJet:
    """Second-order Taylor data of a metric: g(u) = delta + h u + q u u.

    h[i][j][k] is the derivative of g_ij along u^k at the origin; q[i][j][k][l]
    is the coefficient of u^k u^l, stored symmetric in (k, l).  Both are
    J-invariant bilinear forms in (i, j), which is compatibility of the metric
    with J through second order.
    """

    model: HermitianModel
    h: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)

    @classmethod
    def from_arrays(cls, model: HermitianModel, h, q, *, validate: bool = True) -> "MetricJet":
        h = coerce_entries(h)
        q = coerce_entries(q)
        dim = model.dim
        if h.shape != (dim, dim, dim) or q.shape != (dim,) * 4:
            raise InvalidJet("jet arrays have wrong shape")
        if is_exact(h) != is_exact(q):
            raise InvalidJet("h and q must use the same scalar mode")
        if validate:
            tol = 0.0 if is_exact(h) else max(_float_tol(h), _float_tol(q))
            if not _all_zero(h - h.transpose(1, 0, 2), tol):
                raise InvalidJet("h is not symmetric in the form indices")
            if not _all_zero(q - _permuted(q, (1, 0, 2, 3)), tol):
                raise InvalidJet("q is not symmetric in the form indices")
            if not _all_zero(q - _permuted(q, (0, 1, 3, 2)), tol):
                raise InvalidJet("q is not symmetric in the point indices")
            if not _all_zero(h - apply_j(model, h, (0, 1)), tol):
                raise InvalidJet("h breaks J-compatibility of the metric")
            if not _all_zero(q - apply_j(model, q, (0, 1)), tol):
                raise InvalidJet("q breaks J-compatibility of the metric")
        return cls(model=model, h=h, q=q)

    @property
    def is_exact(self) -> bool:
        return is_exact(self.h)

    def first_jet_vanishes(self) -> bool:
        return _all_zero(self.h)

    def gram_at(self, u) -> np.ndarray:
        """The metric matrix at the point u (exact for exact inputs)."""
        u = coerce_entries(u)
        lin = np.tensordot(self.h, u, axes=([2], [0]))
        quad = np.tensordot(np.tensordot(self.q, u, axes=([3], [0])), u, axes=([2], [0]))
        if self.is_exact:
            base = coerce_entries(np.eye(self.model.dim, dtype=np.int64))
        else:
            base = np.eye(self.model.dim)
        return base + lin + quad


@dataclass(frozen=True, eq=False)
class CoordinateChange:
    """Quadratic holomorphic change z^a = w^a + xi[a][b][c] w^b w^c.

    Complex coefficients are stored as separate real and imaginary parts
    (exact mode keeps them rational); both are symmetric in (b, c).
    """

    model: HermitianModel
    xi_real: np.ndarray = field(repr=False)
    xi_imag: np.ndarray = field(repr=False)

    def is_zero(self) -> bool:
        return _all_zero(self.xi_real) and _all_zero(self.xi_imag)


# ---------------------------------------------------------------------------
# the linearization map and the quadratic-metric construction

def _l_combination(arr: np.ndarray) -> np.ndarray:
    # out[i,j,k,l] = arr[i,k,j,l] + arr[j,l,i,k] - arr[i,l,j,k] - arr[j,k,i,l]
    return (
        _permuted(arr, (0, 2, 1, 3))
        + _permuted(arr, (1, 3, 0, 2))
        - _permuted(arr, (0, 3, 1, 2))
        - _permuted(arr, (1, 2, 0, 3))
    )


def L_map(theta: ThetaTensor) -> CurvatureTensor:
    """Curvature at the origin of the quadratic metric defined by theta."""
    return CurvatureTensor.from_array(theta.model, _l_combination(theta.entries))


def metric_from_theta(theta: ThetaTensor) -> MetricJet:
    """The metric jet delta + theta u u (first derivatives all zero)."""
    dim = theta.model.dim
    h = _zeros((dim, dim, dim), theta.is_exact)
    # the stored point pair is already symmetric; keep it verbatim
    return MetricJet.from_arrays(theta.model, h, theta.entries, validate=False)


def curvature_at_origin(jet: MetricJet) -> CurvatureTensor:
    """Curvature of a jet whose first derivatives vanish at the origin.

    With h = 0 the second-derivative curvature formula collapses to the same
    four-term combination used by L_map, so the result is exact for exact jets.
    """
    if not jet.first_jet_vanishes():
        raise FirstJetNonzero("normalize the first jet before taking curvature")
    return CurvatureTensor.from_array(jet.model, _l_combination(jet.q))


def domega_at_origin(jet: MetricJet) -> np.ndarray:
    """Exterior derivative of the fundamental two-form at the origin.

    out[k][i][j] = (d Omega)(e_k, e_i, e_j); zero exactly when the jet can be
    brought to vanishing first jet by a holomorphic change of coordinates.
    """
    jm = jet.model.j_matrix
    if not jet.is_exact:
        jm = jm.astype(np.float64)
    # p[i][j][k] = derivative along u^k of Omega_ij, Omega_ij = g_im J[m,j]
    p = np.tensordot(jet.h, jm, axes=([1], [0])).transpose(0, 2, 1)
    return p.transpose(2, 0, 1) - p.transpose(0, 2, 1) + p


# ---------------------------------------------------------------------------
# the coefficient space and minimum-norm realization

def _sym_form_entries(a: int, b: int) -> dict:
    if a == b:
        return {(a, a): 1}
    return {(a, b): 1, (b, a): 1}


def _j_plus_forms(model: HermitianModel) -> list:
    """Sparse basis of the symmetric J-invariant forms (orbit sums of pair forms)."""
    perm = model.j_perm
    sign = model.j_sign
    out = []
    for a in range(model.dim):
        for b in range(a, model.dim):
            pa, pb = int(perm[a]), int(perm[b])
            mate = (min(pa, pb), max(pa, pb))
            s = int(sign[a]) * int(sign[b])
            if mate == (a, b) and s < 0:
                # self-paired with sign -1: J-anti-invariant, not in this space
                continue
            if mate < (a, b):
                continue
            e = dict(_sym_form_entries(a, b))
            if mate != (a, b):
                for k, v in _sym_form_entries(*mate).items():
                    e[k] = e.get(k, 0) + s * v
            out.append(e)
    return out


class ThetaBasis:
    """Orthogonal integer basis of the coefficient space at one n."""

    def __init__(self, model: HermitianModel):
        dim = model.dim
        pairs = [(c, d) for c in range(dim) for d in range(c, dim)]
        elements = []
        for f in _j_plus_forms(model):
            for (c, d) in pairs:
                e = {}
                for (i, j), v in f.items():
                    for (k, l), w in _sym_form_entries(c, d).items():
                        e[((i * dim + j) * dim + k) * dim + l] = v * w
                elements.append(e)
        self.model = model
        self.dim = len(elements)
        n = model.n
        if self.dim != n * n * (2 * n * n + n):
            raise RealizeError(f"coefficient basis count {self.dim} is wrong")
        self._idx = [np.array(sorted(e), dtype=np.int64) for e in elements]
        self._val = [
            np.array([e[i] for i in idx], dtype=np.int64)
            for e, idx in zip(elements, self._idx)
        ]
        self.norms = np.array([int((v * v).sum()) for v in self._val], dtype=np.int64)

    def tensor(self, i: int) -> np.ndarray:
        dim = self.model.dim
        out = np.zeros(dim ** 4, dtype=np.int64)
        out[self._idx[i]] = self._val[i]
        return out.reshape((dim,) * 4)

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        dim = self.model.dim
        c = np.asarray(c)
        if np.issubdtype(c.dtype, np.floating):
            flat = np.zeros(dim ** 4, dtype=np.float64)
        else:
            flat = np.full(dim ** 4, Fraction(0), dtype=object)
        for ci, idx, val in zip(c, self._idx, self._val):
            if ci:
                flat[idx] = flat[idx] + ci * val
        return flat.reshape((dim,) * 4)


@dataclass(eq=False)
class _RealizeSpace:
    theta: ThetaBasis
    image_matrix: np.ndarray        # curvature coordinates of the basis images
    normal_solver: PresolvedSystem  # factors M W^-1 M^T once per n
    winv: np.ndarray
    image_float: np.ndarray


_SPACE_CACHE: dict = {}


def _realize_space(model: HermitianModel) -> _RealizeSpace:
    if model.n not in _SPACE_CACHE:
        alg = algebra_basis(model)
        theta = ThetaBasis(model)
        cols = [alg.coords(_l_combination(theta.tensor(i))) for i in range(theta.dim)]
        m = np.array(cols, dtype=object).T
        winv = np.array([Fraction(1, int(w)) for w in theta.norms], dtype=object)
        gram = (m * winv.reshape(1, -1)) @ m.T
        _SPACE_CACHE[model.n] = _RealizeSpace(
            theta=theta,
            image_matrix=m,
            normal_solver=PresolvedSystem(gram),
            winv=winv,
            image_float=m.astype(np.float64),
        )
    return _SPACE_CACHE[model.n]


def _w7_part_sq_norm(a: CurvatureTensor):
    cs = build_components(a.model)
    coords = cs.algebra.coords(a.entries)
    return cs.algebra.sq_norm_of_coords(_project_coords(cs, coords, "W7"))


def solve_realization(a: CurvatureTensor) -> ThetaTensor:
    """Minimum-norm coefficient tensor whose quadratic metric has curvature a.

    Minimality is in the entrywise inner product on coefficient tensors,
    computed through weighted normal equations, so the result does not depend
    on any basis choice.
    """
    tol = 0.0 if a.is_exact else _float_tol(a.entries)
    if not _all_zero(gray_defect(a), tol):
        raise NotRealizable(
            "curvature tensor fails the Gray identity; no Hermitian jet realizes it",
            w7_sq_norm=_w7_part_sq_norm(a),
        )
    space = _realize_space(a.model)
    alg = algebra_basis(a.model)
    b = alg.coords(a.entries)
    if a.is_exact:
        try:
            y = space.normal_solver.solve(b)
        except InconsistentSystem as exc:
            raise NotRealizable(
                "curvature tensor is outside the realizable range",
                w7_sq_norm=_w7_part_sq_norm(a),
            ) from exc
        x = space.winv * (space.image_matrix.T @ y)
    else:
        m = space.image_float
        bf = np.asarray(b, dtype=np.float64)
        wroot = np.sqrt(space.theta.norms.astype(np.float64))
        z, *_ = np.linalg.lstsq(m / wroot, bf, rcond=None)
        x = z / wroot
        if np.max(np.abs(m @ x - bf), initial=0.0) > _float_tol(a.entries):
            raise NotRealizable(
                "curvature tensor is outside the realizable range",
                w7_sq_norm=_w7_part_sq_norm(a),
            )
    return ThetaTensor.from_array(a.model, space.theta.from_coords(x), validate=False)


# ---------------------------------------------------------------------------
# first-jet normalization

def _complex_first_jet(jet: MetricJet):
    """Holomorphic derivative D[a][b][c] of the Hermitian metric component.

    D[a][b][c] is the derivative along z_c of g(Z_a, conj(Z_b)) at the origin,
    with g extended complex-bilinearly and Z_a the holomorphic frame, so the
    component at the origin is delta/2.  Returned as (real part, imag part).
    The fundamental two-form is closed at the origin exactly when D is
    symmetric under swapping its first and third slots.
    """
    n = jet.model.n
    h = jet.h
    quarter = Fraction(1, 4) if jet.is_exact else 0.25
    x = slice(0, n)
    y = slice(n, 2 * n)
    gxx_dx = h[x, x, x]
    gxx_dy = h[x, x, y]
    gxy_dx = h[x, y, x]
    gxy_dy = h[x, y, y]
    re = (gxx_dx + gxy_dy) * quarter
    im = (gxy_dx - gxx_dy) * quarter
    return re, im


def _real_quadratic_coefficients(change: CoordinateChange) -> np.ndarray:
    """Real form Q[p][j][k] of the holomorphic change, symmetric in (j, k)."""
    n = change.model.n
    al, be = change.xi_real, change.xi_imag
    q = _zeros((2 * n, 2 * n, 2 * n), is_exact(al))
    x = slice(0, n)
    y = slice(n, 2 * n)
    q[x, x, x] = al
    q[x, y, y] = -al
    q[x, x, y] = -be
    q[x, y, x] = -be.transpose(0, 2, 1)
    q[y, x, x] = be
    q[y, y, y] = -be
    q[y, x, y] = al
    q[y, y, x] = al.transpose(0, 2, 1)
    return q


def apply_change(jet: MetricJet, change: CoordinateChange) -> MetricJet:
    """Pull the jet back along u = v + Q(v, v), expanded to second order."""
    qc = _real_quadratic_coefficients(change)
    h, q = jet.h, jet.q
    half = Fraction(1, 2) if jet.is_exact else 0.5
    h_new = h + 2 * qc + 2 * qc.transpose(1, 0, 2)
    raw = (
        q
        + np.tensordot(h, qc, axes=([2], [0]))
        + 2 * np.tensordot(qc, h, axes=([0], [0])).transpose(0, 2, 1, 3)
        + 2 * np.tensordot(h, qc, axes=([1], [0])).transpose(0, 2, 1, 3)
        + 4 * np.tensordot(qc, qc, axes=([0], [0])).transpose(0, 2, 1, 3)
    )
    q_new = (raw + raw.transpose(0, 1, 3, 2)) * half
    return MetricJet.from_arrays(jet.model, h_new, q_new)


def normalize_first_jet(jet: MetricJet):
    """Quadratic holomorphic change making the first derivatives vanish.

    Returns (change, transformed jet).  The change exists exactly when the
    fundamental two-form is closed at the origin; the transformed jet has the
    same curvature there.
    """
    tol = 0.0 if jet.is_exact else max(_float_tol(jet.h), _float_tol(jet.q))
    if not _all_zero(domega_at_origin(jet), tol):
        raise KaehlerConditionFails("the fundamental two-form is not closed at the origin")
    d_re, d_im = _complex_first_jet(jet)
    # xi[d][b][c] = -D[c][d][b]; closedness makes this symmetric in (b, c).
    # The coefficient is -1 (not -1/2) because the Hermitian component of the
    # metric at the origin is delta/2 in this normalization.
    xi_re = -d_re.transpose(1, 2, 0)
    xi_im = -d_im.transpose(1, 2, 0)
    if not _all_zero(xi_re - xi_re.transpose(0, 2, 1), tol) or not _all_zero(
            xi_im - xi_im.transpose(0, 2, 1), tol):
        raise KaehlerConditionFails("holomorphic first jet is not symmetric")
    change = CoordinateChange(model=jet.model, xi_real=xi_re, xi_imag=xi_im)
    new = apply_change(jet, change)
    if jet.is_exact:
        if not new.first_jet_vanishes():
            raise RealizeError("first-order terms did not cancel")
        return change, new
    if float(max_abs(new.h)) > tol:
        raise RealizeError("first-order terms did not cancel")
    return change, MetricJet.from_arrays(
        jet.model, np.zeros_like(new.h), new.q, validate=False)


# ---------------------------------------------------------------------------
# the full pipeline

@dataclass(frozen=True)
class RealizationReport:
    """Checks performed while realizing one curvature tensor."""

    round_trip_residual: object
    gray_defect_sq_norm: object
    domega_max: object
    component_sq_norms: dict
    nonsingular_radius: float


def _nonsingular_radius(q: np.ndarray) -> float:
    # g(u) = I + q u u stays positive definite while |q|_F |u|^2 < 1
    sq = float(sum(x * x for x in q.flat))
    if sq == 0.0:
        return math.inf
    return sq ** -0.25


def realize(a: CurvatureTensor):
    """Realize a curvature tensor by a metric jet; returns (theta, jet, report).

    The jet has vanishing first derivatives, closed fundamental two-form at
    the origin, and curvature equal to the input (exactly so in rational
    mode).  Raises NotRealizable when the input has a nonzero obstruction
    component.
    """
    theta = solve_realization(a)
    jet = metric_from_theta(theta)
    back = curvature_at_origin(jet)
    residual = max_abs(back.entries - a.entries)
    if a.is_exact and residual != 0:
        raise RealizeError("round trip failed to reproduce the input exactly")
    defect = gray_defect(a)
    parts = decompose(a)
    return theta, jet, RealizationReport(
        round_trip_residual=residual,
        gray_defect_sq_norm=sum(x * x for x in defect.flat),
        domega_max=max_abs(domega_at_origin(jet)),
        component_sq_norms=dict(parts.norms),
        nonsingular_radius=_nonsingular_radius(jet.q),
    )
