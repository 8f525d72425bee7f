"""Exact linear algebra over the rationals, plus a float fallback for rank.

All subspace bookkeeping in this package is exact: matrices carry
``fractions.Fraction`` (or plain int) entries in numpy object arrays, and
elimination is fraction-free where possible (integer rows kept primitive by
content division).  Float matrices are accepted only where a tolerance makes
sense (``rank``), using a relative singular-value threshold.

Subspaces are value objects: an ambient dimension, a list of spanning
vectors, and an optional diagonal ambient inner product (weights) used by the
orthogonality operations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

__all__ = [
    "LinalgError",
    "InconsistentSystem",
    "AmbientMismatch",
    "rational_matrix",
    "rational_vector",
    "rank",
    "nullspace",
    "solve",
    "min_norm_solve",
    "int_kernel",
    "int_row_space",
    "sparse_nullity",
    "SubspaceBasis",
]

FLOAT_RANK_TOL = 1e-9


class LinalgError(RuntimeError):
    pass


class InconsistentSystem(LinalgError):
    """The linear system has no exact solution."""


class AmbientMismatch(LinalgError):
    """Subspace operands live in different ambient spaces."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def rational_matrix(m) -> np.ndarray:
    """Copy input into a 2-D object array of Fractions."""
    a = np.asarray(m, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    out = np.empty(a.shape, dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i, j] = _to_fraction(a[i, j])
    return out


def rational_vector(v) -> np.ndarray:
    a = np.asarray(v, dtype=object).ravel()
    return np.array([_to_fraction(x) for x in a], dtype=object)


def _is_float_matrix(m) -> bool:
    a = np.asarray(m)
    return a.dtype.kind == "f"


def _content_reduce(row: np.ndarray) -> np.ndarray:
    """Divide an integer object row by its content (gcd of entries)."""
    g = 0
    for x in row:
        if x:
            g = gcd(g, abs(int(x)))
            if g == 1:
                return row
    if g > 1:
        row = row // g
    return row


def _int_rows(m) -> list[np.ndarray]:
    """Rows of m as primitive integer object vectors (denominators cleared rowwise)."""
    a = np.asarray(m, dtype=object)
    rows = []
    for r in a:
        den = 1
        for x in r:
            f = _to_fraction(x)
            den = den * f.denominator // gcd(den, f.denominator)
        out = np.array([int(_to_fraction(x) * den) for x in r], dtype=object)
        rows.append(_content_reduce(out))
    return rows


def primitive_rows(m) -> list[np.ndarray]:
    """Rescale each row of a rational matrix to a primitive integer vector."""
    return _int_rows(m)


def _int_echelon(rows: list[np.ndarray], reduce_up: bool = True,
                 prefer_cols: int | None = None):
    """Integer echelon form with content normalization.

    Returns (pivot_rows, pivot_cols); pivot rows are primitive integer
    vectors, fully reduced against each other when reduce_up is set.
    Pivots favor small entries; with prefer_cols set, a pivot is placed in
    the first prefer_cols columns whenever the row is nonzero there.
    """
    piv_rows: list[np.ndarray] = []
    piv_cols: list[int] = []
    for r0 in rows:
        r = r0
        for pr, pc in zip(piv_rows, piv_cols):
            if r[pc]:
                a, b = int(pr[pc]), int(r[pc])
                g = gcd(abs(a), abs(b))
                r = r * (a // g) - pr * (b // g)
        nz = np.nonzero(r != 0)[0]
        if len(nz) == 0:
            continue
        r = _content_reduce(r.copy())
        nz = np.nonzero(r != 0)[0]
        if prefer_cols is not None and nz[0] < prefer_cols:
            nz = nz[nz < prefer_cols]
        col = int(nz[np.argmin([abs(int(r[c])) for c in nz])])
        piv_rows.append(r)
        piv_cols.append(col)
    if reduce_up:
        k = len(piv_rows)
        for i in range(k - 1, -1, -1):
            r = piv_rows[i]
            for j in range(k):
                if j == i:
                    continue
                c = piv_cols[j]
                if r[c]:
                    a, b = int(piv_rows[j][c]), int(r[c])
                    g = gcd(abs(a), abs(b))
                    r = r * (a // g) - piv_rows[j] * (b // g)
            piv_rows[i] = _content_reduce(r)
    return piv_rows, piv_cols


def _kernel_from_echelon(piv_rows, piv_cols, ncols) -> list[np.ndarray]:
    pivset = set(piv_cols)
    free = [c for c in range(ncols) if c not in pivset]
    kern = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, c in zip(piv_rows, piv_cols):
            v[c] = Fraction(-int(r[fc]), int(r[c]))
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        vi = np.array([int(x * den) for x in v], dtype=object)
        kern.append(_content_reduce(vi))
    return kern


def int_kernel(m) -> list[np.ndarray]:
    """Exact kernel basis of an integer (or rational) matrix, as primitive int vectors."""
    a = np.asarray(m, dtype=object)
    if a.size == 0:
        ncols = a.shape[1] if a.ndim == 2 else 0
        return [np.array([1 if i == j else 0 for i in range(ncols)], dtype=object)
                for j in range(ncols)]
    rows = _int_rows(a)
    piv_rows, piv_cols = _int_echelon(rows)
    return _kernel_from_echelon(piv_rows, piv_cols, a.shape[1])


def int_row_space(m) -> list[np.ndarray]:
    """Primitive integer basis of the row space of m."""
    a = np.asarray(m, dtype=object)
    if a.size == 0:
        return []
    rows = _int_rows(a)
    piv_rows, _ = _int_echelon(rows)
    return piv_rows


def rank(m, *, tol: float = FLOAT_RANK_TOL) -> int:
    """Rank of a matrix; exact for rational entries, SVD threshold for float."""
    a = np.asarray(m)
    if a.size == 0:
        return 0
    if _is_float_matrix(a):
        s = np.linalg.svd(a.astype(float), compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.sum(s > tol * s[0]))
    rows = _int_rows(np.asarray(m, dtype=object))
    piv_rows, _ = _int_echelon(rows, reduce_up=False)
    return len(piv_rows)


def nullspace(m) -> list[np.ndarray]:
    """Exact rational kernel basis (returned with integer entries, primitive)."""
    a = np.asarray(m, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return int_kernel(a)


def solve(m, b) -> np.ndarray:
    """One exact solution of m x = b, or raise InconsistentSystem."""
    a = rational_matrix(m)
    rhs = rational_vector(b)
    nrows, ncols = a.shape
    if rhs.shape[0] != nrows:
        raise ValueError("rhs length mismatch")
    aug = np.concatenate([a, rhs.reshape(-1, 1)], axis=1)
    piv_cols: list[int] = []
    r = 0
    for c in range(ncols):
        prow = None
        for rr in range(r, nrows):
            if aug[rr, c]:
                prow = rr
                break
        if prow is None:
            continue
        if prow != r:
            aug[[r, prow]] = aug[[prow, r]]
        aug[r] = aug[r] / aug[r, c]
        for rr in range(nrows):
            if rr != r and aug[rr, c]:
                aug[rr] = aug[rr] - aug[rr, c] * aug[r]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    for rr in range(r, nrows):
        if aug[rr, ncols]:
            raise InconsistentSystem("no exact solution")
    x = np.array([Fraction(0)] * ncols, dtype=object)
    for i, c in enumerate(piv_cols):
        x[c] = aug[i, ncols]
    return x


class PresolvedSystem:
    """Exact solver for m x = b factored once, reusable across right-hand sides.

    Echelonizes [m | I] a single time; each solve is then a matrix-vector
    product plus a consistency check on the rows whose m-part vanished.
    """

    def __init__(self, m):
        a = rational_matrix(m)
        nrows, ncols = a.shape
        ident = np.full((nrows, nrows), Fraction(0), dtype=object)
        for i in range(nrows):
            ident[i, i] = Fraction(1)
        rows = _int_rows(np.concatenate([a, ident], axis=1))
        piv_rows, piv_cols = _int_echelon(rows, reduce_up=True, prefer_cols=ncols)
        self.ncols = ncols
        self._pivots = []      # (column, pivot value, transform row)
        self._null_rows = []   # transform rows of vanished equations
        for r, c in zip(piv_rows, piv_cols):
            if c < ncols:
                self._pivots.append((c, r[c], r[ncols:]))
            else:
                self._null_rows.append(r[ncols:])

    def solve(self, b) -> np.ndarray:
        """One exact solution of m x = b (free variables set to zero)."""
        rhs = rational_vector(b)
        for s in self._null_rows:
            if s @ rhs != 0:
                raise InconsistentSystem("no exact solution")
        x = np.full(self.ncols, Fraction(0), dtype=object)
        for c, p, s in self._pivots:
            x[c] = (s @ rhs) / p
        return x


def min_norm_solve(m, b, weights=None) -> np.ndarray:
    """Minimum-norm exact solution of m x = b.

    The norm minimized is |x|^2 = sum_i w_i x_i^2 with optional positive
    rational weights (default all 1).  Solution: x = W^-1 m^T y where
    (m W^-1 m^T) y = b; raises InconsistentSystem when b is not in the range.
    """
    a = rational_matrix(m)
    rhs = rational_vector(b)
    nrows, ncols = a.shape
    if weights is None:
        winv = np.array([Fraction(1)] * ncols, dtype=object)
    else:
        w = rational_vector(weights)
        if w.shape[0] != ncols or any(x <= 0 for x in w):
            raise ValueError("weights must be positive, one per column")
        winv = np.array([Fraction(1) / x for x in w], dtype=object)
    aw = a * winv.reshape(1, -1)
    g = aw @ a.T
    y = solve(g, rhs)
    x = winv * (a.T @ y)
    return x


def sparse_nullity(rows, ncols: int) -> int:
    """Nullity of a sparse exact matrix given as an iterable of {col: coeff} rows.

    Straight sparse Gaussian elimination over Fractions; intended for very
    sparse constraint systems (a few nonzeros per row).
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    rank_ = 0
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while True:
            hit = None
            for c in r:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                break
            f = r[hit]
            for cc, v in pivots[hit].items():
                nv = r.get(cc, Fraction(0)) - f * v
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        c = min(r)
        f = r[c]
        pivots[c] = {cc: v / f for cc, v in r.items()}
        rank_ += 1
    return ncols - rank_


def _as_object_matrix(vectors, ambient_dim) -> np.ndarray:
    if len(vectors) == 0:
        return np.zeros((0, ambient_dim), dtype=object)
    return np.array([np.asarray(v, dtype=object) for v in vectors], dtype=object)


class SubspaceBasis:
    """A subspace of Q^ambient_dim spanned by exact vectors.

    ``weights`` is the diagonal of the ambient inner product (positive
    rationals); orthogonality-based operations use it, plain span operations
    ignore it.  Vectors are not required to be mutually orthogonal.
    """

    def __init__(self, ambient_dim: int, vectors, weights=None):
        self.ambient_dim = int(ambient_dim)
        mat = _as_object_matrix(list(vectors), self.ambient_dim)
        if mat.shape[1] != self.ambient_dim and mat.shape[0] > 0:
            raise AmbientMismatch("vector length != ambient_dim")
        self._mat = mat
        if weights is not None:
            weights = rational_vector(weights)
            if weights.shape[0] != self.ambient_dim:
                raise AmbientMismatch("weights length != ambient_dim")
        self.weights = weights

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    def matrix(self) -> np.ndarray:
        """Spanning vectors as rows (object array, do not mutate)."""
        return self._mat

    def vectors(self) -> list[np.ndarray]:
        return [self._mat[i] for i in range(self.dim)]

    def _check_mate(self, other: "SubspaceBasis") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(
                f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def _weight_vec(self) -> np.ndarray:
        if self.weights is None:
            return np.array([Fraction(1)] * self.ambient_dim, dtype=object)
        return self.weights

    def reduced(self) -> "SubspaceBasis":
        """Same subspace with an independent (echelonized) spanning set."""
        rows = int_row_space(self._mat) if self.dim else []
        return SubspaceBasis(self.ambient_dim, rows, self.weights)

    def contains(self, v) -> bool:
        if self.dim == 0:
            return not np.any(rational_vector(v) != 0)
        try:
            solve(self._mat.T, v)
            return True
        except InconsistentSystem:
            return False

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        self._check_mate(other)
        return all(self.contains(v) for v in other.vectors())

    def equals(self, other: "SubspaceBasis") -> bool:
        self._check_mate(other)
        return self.contains_subspace(other) and other.contains_subspace(self)

    def span_union(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check_mate(other)
        stacked = list(self.vectors()) + list(other.vectors())
        rows = int_row_space(_as_object_matrix(stacked, self.ambient_dim)) if stacked else []
        return SubspaceBasis(self.ambient_dim, rows, self.weights)

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        self._check_mate(other)
        if self.dim == 0 or other.dim == 0:
            return SubspaceBasis(self.ambient_dim, [], self.weights)
        # [A^T | -B^T] [a; b] = 0  ->  intersection vectors A^T a
        block = np.concatenate([self._mat.T, -other._mat.T], axis=1)
        kern = int_kernel(block)
        vecs = []
        for k in kern:
            a = k[: self.dim]
            v = a @ self._mat
            if np.any(v != 0):
                vecs.append(_content_reduce(np.asarray(v, dtype=object)))
        rows = int_row_space(_as_object_matrix(vecs, self.ambient_dim)) if vecs else []
        return SubspaceBasis(self.ambient_dim, rows, self.weights)

    def ortho_complement_within(self, other: "SubspaceBasis") -> "SubspaceBasis":
        """Vectors of ``other`` orthogonal to all of ``self`` (ambient weights)."""
        self._check_mate(other)
        if other.dim == 0:
            return SubspaceBasis(self.ambient_dim, [], self.weights)
        if self.dim == 0:
            return other.reduced()
        w = self._weight_vec()
        # constraint on coefficients c of other: (self * w) other^T c = 0
        con = (self._mat * w.reshape(1, -1)) @ other._mat.T
        kern = int_kernel(con)
        vecs = [_content_reduce(np.asarray(k @ other._mat, dtype=object)) for k in kern]
        vecs = [v for v in vecs if np.any(v != 0)]
        rows = int_row_space(_as_object_matrix(vecs, self.ambient_dim)) if vecs else []
        return SubspaceBasis(self.ambient_dim, rows, self.weights)

    def __repr__(self) -> str:  # pragma: no cover
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"
