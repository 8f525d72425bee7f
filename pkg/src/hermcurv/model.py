"""The standard Hermitian vector space (R^{2n}, <.,.>, J).

Basis order is (x_1..x_n, y_1..y_n); the complex structure sends x_i to y_i
and y_i to -x_i, so as a matrix J is a signed permutation.  Everything else
in the package works relative to a model produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from . import linalg

__all__ = [
    "ModelError",
    "DimensionTooSmall",
    "NotPositiveDefinite",
    "NotComplexStructure",
    "NotCompatible",
    "HermitianModel",
    "standard_model",
    "kaehler_form",
    "random_unitary",
    "canonicalize",
]


class ModelError(RuntimeError):
    pass


class DimensionTooSmall(ModelError):
    pass


class NotPositiveDefinite(ModelError):
    pass


class NotComplexStructure(ModelError):
    pass


class NotCompatible(ModelError):
    pass


@dataclass(frozen=True)
class HermitianModel:
    """Dimension bookkeeping plus the complex structure in the canonical basis."""

    n: int
    j_matrix: np.ndarray = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return 2 * self.n

    # canonical index helpers (0-based)
    def x(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return i

    def y(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return self.n + i

    def axis_label(self, i: int) -> str:
        return f"x{i + 1}" if i < self.n else f"y{i - self.n + 1}"

    @property
    def j_perm(self) -> np.ndarray:
        """perm with J e_i = j_sign[i] * e_{j_perm[i]}."""
        n = self.n
        perm = np.empty(2 * n, dtype=np.int64)
        perm[:n] = np.arange(n) + n
        perm[n:] = np.arange(n)
        return perm

    @property
    def j_sign(self) -> np.ndarray:
        n = self.n
        sign = np.empty(2 * n, dtype=np.int64)
        sign[:n] = 1
        sign[n:] = -1
        return sign


_MODELS: dict[int, HermitianModel] = {}


def standard_model(n: int) -> HermitianModel:
    """The canonical model on R^{2n}; requires n >= 2."""
    if n < 2:
        raise DimensionTooSmall("need n >= 2 (real dimension at least 4)")
    if n not in _MODELS:
        J = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for i in range(n):
            J[n + i, i] = 1      # J x_i = y_i
            J[i, n + i] = -1     # J y_i = -x_i
        _MODELS[n] = HermitianModel(n=n, j_matrix=J)
    return _MODELS[n]


def kaehler_form(model: HermitianModel) -> np.ndarray:
    """Omega(x, y) = <x, J y>; entries Omega[i, j] = J[i, j]."""
    return model.j_matrix.copy()


def random_unitary(model: HermitianModel, seed: int) -> np.ndarray:
    """A float unitary matrix commuting with J (exp of a random compatible generator)."""
    rng = np.random.default_rng(seed)
    n = model.n
    a = rng.standard_normal((n, n))
    a = (a - a.T) / 2.0
    b = rng.standard_normal((n, n))
    b = (b + b.T) / 2.0
    X = np.block([[a, -b], [b, a]])
    U = scipy.linalg.expm(X)
    J = model.j_matrix.astype(float)
    if not np.allclose(U.T @ U, np.eye(2 * n), atol=1e-12):
        raise ModelError("generated matrix is not orthogonal")
    if not np.allclose(U @ J, J @ U, atol=1e-12):
        raise ModelError("generated matrix does not commute with J")
    return U


def _sqrt_fraction(x: Fraction):
    """Exact square root of a positive rational, or None."""
    if x <= 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _check_pair(gram: np.ndarray, j_raw: np.ndarray, exact: bool, tol: float):
    dim = gram.shape[0]
    if dim % 2 != 0 or dim < 4:
        raise DimensionTooSmall("need even dimension >= 4")
    jj = j_raw @ j_raw
    eye = np.eye(dim, dtype=jj.dtype if not exact else object)
    if exact:
        eye = np.array([[Fraction(1) if i == k else Fraction(0) for k in range(dim)]
                        for i in range(dim)], dtype=object)
        if np.any(gram != gram.T):
            raise NotCompatible("gram not symmetric")
        if np.any(jj != -eye):
            raise NotComplexStructure("J^2 != -I")
        if np.any(j_raw.T @ gram @ j_raw != gram):
            raise NotCompatible("gram not J-invariant")
    else:
        if not np.allclose(gram, gram.T, atol=tol):
            raise NotCompatible("gram not symmetric")
        if not np.allclose(jj, -np.eye(dim), atol=tol):
            raise NotComplexStructure("J^2 != -I")
        if not np.allclose(j_raw.T @ gram @ j_raw, gram, atol=tol):
            raise NotCompatible("gram not J-invariant")


def canonicalize(gram, j_raw, *, tol: float = 1e-9):
    """Change of basis C with C^T gram C = identity and C^-1 j_raw C = standard J.

    Exact rational output when every normalization is a perfect rational
    square, float otherwise (and always for float input).  Returns
    (model, C).  Raises NotPositiveDefinite / NotComplexStructure /
    NotCompatible on invalid input.
    """
    gf = np.asarray(gram)
    jf = np.asarray(j_raw)
    float_mode = gf.dtype.kind == "f" or jf.dtype.kind == "f"
    if float_mode:
        G = gf.astype(float)
        J = jf.astype(float)
        _check_pair(G, J, exact=False, tol=max(tol, 1e-9))
    else:
        G = linalg.rational_matrix(gram)
        J = linalg.rational_matrix(j_raw)
        _check_pair(G, J, exact=True, tol=tol)
    dim = G.shape[0]
    n = dim // 2

    def ip(u, v):
        return u @ G @ v

    pairs = []  # (v, w=Jv, norm2)
    basis_done: list[np.ndarray] = []

    def orthogonalize(v):
        for u in basis_done:
            c = ip(u, v) / ip(u, u)
            v = v - c * u
        return v

    k = 0
    if float_mode:
        candidates = [np.eye(dim)[i] for i in range(dim)]
    else:
        zero = Fraction(0)
        one = Fraction(1)
        candidates = [np.array([one if j == i else zero for j in range(dim)], dtype=object)
                      for i in range(dim)]
    for cand in candidates:
        if len(pairs) == n:
            break
        v = orthogonalize(cand)
        nv = ip(v, v)
        if float_mode:
            if abs(nv) < tol:
                continue
            if nv < 0:
                raise NotPositiveDefinite("gram has nonpositive directions")
        else:
            if nv == 0:
                if np.any(v != 0):
                    raise NotPositiveDefinite("gram has a null direction")
                continue
            if nv < 0:
                raise NotPositiveDefinite("gram has nonpositive directions")
        w = J @ v
        pairs.append((v, w, nv))
        basis_done.append(v)
        basis_done.append(w)
        k += 1
    if len(pairs) != n:
        raise NotPositiveDefinite("could not complete a J-adapted basis")

    cols = []
    if not float_mode:
        roots = [_sqrt_fraction(nv) for (_, _, nv) in pairs]
        if any(r is None for r in roots):
            float_mode = True
        else:
            for (v, _, _), r in zip(pairs, roots):
                cols.append(v / r)
            for (_, w, _), r in zip(pairs, roots):
                cols.append(w / r)
    if float_mode:
        for (v, _, nv) in pairs:
            cols.append(np.asarray(v, dtype=float) / float(nv) ** 0.5)
        for (_, w, nv) in pairs:
            cols.append(np.asarray(w, dtype=float) / float(nv) ** 0.5)
    C = np.stack(cols, axis=1)
    return standard_model(n), C
