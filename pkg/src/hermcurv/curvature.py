"""Curvature tensors on the standard Hermitian model.

Rank-4 arrays with the Riemann symmetries (antisymmetry in the first
pair, pair exchange, first Bianchi), the classical contractions, the
bilinear-form splitting, and the two defect operators whose kernels
cut out the Gray subspace and the J-commuting component.

Entries are either exact (object arrays of Fraction) or float64; every
operation preserves the mode of its input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import HermitianModel


class CurvatureError(RuntimeError):
    pass


class ShapeMismatch(CurvatureError):
    pass


class SymmetryViolation(CurvatureError):
    pass


# ---------------------------------------------------------------------------
# scalar-mode plumbing

def _exactify(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def coerce_entries(raw) -> np.ndarray:
    """Normalize input to a float64 array or an object array of Fractions."""
    arr = np.asarray(raw)
    if np.issubdtype(arr.dtype, np.floating):
        return arr.astype(np.float64)
    out = np.empty(arr.shape, dtype=object)
    out.flat = [_exactify(x) for x in arr.flat]
    return out


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def max_abs(arr: np.ndarray):
    if arr.size == 0:
        return 0
    if is_exact(arr):
        return max(abs(x) for x in arr.flat)
    return float(np.max(np.abs(arr)))


def _require_zero(arr: np.ndarray, scale, what: str) -> None:
    if is_exact(arr):
        if any(x != 0 for x in arr.flat):
            raise SymmetryViolation(f"{what} violated (exact mode)")
    elif arr.size and np.max(np.abs(arr)) > 1e-10 * (1.0 + scale):
        raise SymmetryViolation(f"{what} violated beyond float tolerance")


def _scale(arr: np.ndarray, num: int, den: int) -> np.ndarray:
    if is_exact(arr):
        return arr * Fraction(num, den)
    return arr * (num / den)


# ---------------------------------------------------------------------------
# slot operations

def apply_j(model: HermitianModel, arr: np.ndarray, slots) -> np.ndarray:
    """Substitute J into the given argument slots of a multilinear array."""
    perm = model.j_perm
    sign = model.j_sign
    out = arr
    for ax in slots:
        # J e_i = sign[i] e_{perm[i]}, so slot substitution is a signed take
        out = np.take(out, perm, axis=ax)
        shape = [1] * out.ndim
        shape[ax] = model.dim
        out = out * sign.reshape(shape)
    return out


def transform_slots(arr: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Pull a multilinear array back along the matrix t in every slot."""
    out = arr
    for _ in range(arr.ndim):
        # contracting axis 0 and appending the new axis restores the
        # original slot order after ndim rounds
        out = np.tensordot(out, t, axes=([0], [0]))
    return out


def _permuted(arr: np.ndarray, pattern) -> np.ndarray:
    # out[idx] = arr[idx[pattern]] for a slot permutation pattern
    return np.transpose(arr, np.argsort(pattern))


# the signed slot symmetries generated by (xy swap, zw swap, pair exchange)
_PAIR_GROUP = (
    ((0, 1, 2, 3), 1),
    ((1, 0, 2, 3), -1),
    ((0, 1, 3, 2), -1),
    ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), 1),
    ((3, 2, 0, 1), -1),
    ((2, 3, 1, 0), -1),
    ((3, 2, 1, 0), 1),
)


def bianchi_sum(arr: np.ndarray) -> np.ndarray:
    # B(T)[x,y,z,w] = T[x,y,z,w] + T[y,z,x,w] + T[z,x,y,w]
    return arr + _permuted(arr, (1, 2, 0, 3)) + _permuted(arr, (2, 0, 1, 3))


# ---------------------------------------------------------------------------
# the tensor type

@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """An element of the curvature space, stored as a dense (2n)^4 array."""

    model: HermitianModel
    entries: np.ndarray = field(repr=False)

    @classmethod
    def from_array(cls, model: HermitianModel, raw, *, validate: bool = True) -> "CurvatureTensor":
        arr = coerce_entries(raw)
        expect = (model.dim,) * 4
        if arr.shape != expect:
            raise ShapeMismatch(f"expected shape {expect}, got {arr.shape}")
        if validate:
            scale = max_abs(arr)
            _require_zero(arr + _permuted(arr, (1, 0, 2, 3)), scale, "antisymmetry in the first pair")
            _require_zero(arr - _permuted(arr, (2, 3, 0, 1)), scale, "pair-exchange symmetry")
            _require_zero(bianchi_sum(arr), scale, "first Bianchi identity")
        return cls(model=model, entries=arr)

    @property
    def is_exact(self) -> bool:
        return is_exact(self.entries)

    def is_zero(self) -> bool:
        if self.is_exact:
            return all(x == 0 for x in self.entries.flat)
        return not np.any(self.entries)

    def __add__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        self._check_mate(other)
        return CurvatureTensor(self.model, self.entries + other.entries)

    def __sub__(self, other: "CurvatureTensor") -> "CurvatureTensor":
        self._check_mate(other)
        return CurvatureTensor(self.model, self.entries - other.entries)

    def __mul__(self, c) -> "CurvatureTensor":
        c = c if isinstance(c, (float, np.floating)) or not self.is_exact else _exactify(c)
        return CurvatureTensor(self.model, self.entries * c)

    __rmul__ = __mul__

    def __neg__(self) -> "CurvatureTensor":
        return CurvatureTensor(self.model, -self.entries)

    def _check_mate(self, other: "CurvatureTensor") -> None:
        if other.model.n != self.model.n:
            raise ShapeMismatch("tensors live on different models")


def symmetrize(model: HermitianModel, raw) -> CurvatureTensor:
    """Orthogonal projection of a rank-4 array onto the curvature space."""
    arr = coerce_entries(raw)
    expect = (model.dim,) * 4
    if arr.shape != expect:
        raise ShapeMismatch(f"expected shape {expect}, got {arr.shape}")
    s8 = None
    for pattern, sgn in _PAIR_GROUP:
        term = _permuted(arr, pattern) if sgn > 0 else -_permuted(arr, pattern)
        s8 = term if s8 is None else s8 + term
    # subtract the Bianchi-violating part: on pair-symmetric tensors the
    # cyclic sum B satisfies B(B(T)) = 3 B(T)
    out = _scale(3 * s8 - bianchi_sum(s8), 1, 24)
    return CurvatureTensor.from_array(model, out)


# ---------------------------------------------------------------------------
# contractions

def ricci(a: CurvatureTensor) -> np.ndarray:
    """rho(x, y) = A(e_i, x, y, e_i), summed over the canonical basis."""
    return np.trace(a.entries, axis1=0, axis2=3)


def tau(a: CurvatureTensor):
    return np.trace(ricci(a))


def star_ricci(a: CurvatureTensor) -> np.ndarray:
    """rho*(x, y) = A(e_i, x, Jy, J e_i); not symmetric in general."""
    twisted = apply_j(a.model, a.entries, (2, 3))
    return np.trace(twisted, axis1=0, axis2=3)


def tau_star(a: CurvatureTensor):
    return np.trace(star_ricci(a))


# ---------------------------------------------------------------------------
# pullback and defect operators

def pullback(a: CurvatureTensor, t) -> CurvatureTensor:
    """(T*A)(x, y, z, w) = A(Tx, Ty, Tz, Tw)."""
    t = np.asarray(t)
    if t.shape != (a.model.dim, a.model.dim):
        raise ShapeMismatch(f"transform must be {a.model.dim} x {a.model.dim}")
    return CurvatureTensor.from_array(a.model, transform_slots(a.entries, t))


def j_star(a: CurvatureTensor) -> CurvatureTensor:
    """Pullback by the complex structure; an involution on the curvature space."""
    return CurvatureTensor(a.model, apply_j(a.model, a.entries, (0, 1, 2, 3)))


def gray_defect(a: CurvatureTensor) -> np.ndarray:
    """The alternating J-substitution combination; zero exactly on the Gray subspace.

    Returned as a raw rank-4 array: the combination of a curvature tensor
    need not satisfy the curvature symmetries itself, and membership is
    tested on the raw value.
    """
    m, e = a.model, a.entries
    plus = e + apply_j(m, e, (0, 1, 2, 3))
    minus = sum(apply_j(m, e, pair) for pair in ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)))
    return plus - minus


def w7_defect(a: CurvatureTensor) -> np.ndarray:
    """A(Jx, y, z, w) - A(x, y, Jz, w); zero exactly on the J-commuting component."""
    m, e = a.model, a.entries
    return apply_j(m, e, (0,)) - apply_j(m, e, (2,))


# ---------------------------------------------------------------------------
# bilinear-form decomposition

def identity_form(model: HermitianModel, *, exact: bool = True) -> np.ndarray:
    if exact:
        out = np.empty((model.dim, model.dim), dtype=object)
        out.flat = [Fraction(0)] * out.size
        for i in range(model.dim):
            out[i, i] = Fraction(1)
        return out
    return np.eye(model.dim)


def omega_twist(model: HermitianModel, theta) -> np.ndarray:
    """omega_theta(x, y) = theta(x, Jy)."""
    return apply_j(model, coerce_entries(theta), (1,))


@dataclass(frozen=True, eq=False)
class FormDecomposition:
    """The six-part splitting of a bilinear form on the model.

    Symmetric and antisymmetric halves are each split by the sign of
    composing J into both slots; the J-invariant symmetric half sheds a
    multiple of the metric, the J-invariant antisymmetric half a multiple
    of the fundamental two-form.
    """

    model: HermitianModel
    trace_coefficient: object
    omega_coefficient: object
    trace_part: np.ndarray = field(repr=False)
    sym_plus_traceless: np.ndarray = field(repr=False)
    sym_minus: np.ndarray = field(repr=False)
    omega_part: np.ndarray = field(repr=False)
    alt_plus_traceless: np.ndarray = field(repr=False)
    alt_minus: np.ndarray = field(repr=False)

    def parts(self) -> tuple:
        return (
            self.trace_part,
            self.sym_plus_traceless,
            self.sym_minus,
            self.omega_part,
            self.alt_plus_traceless,
            self.alt_minus,
        )

    def total(self) -> np.ndarray:
        out = self.trace_part
        for p in self.parts()[1:]:
            out = out + p
        return out


def decompose_form(model: HermitianModel, theta) -> FormDecomposition:
    """Split a bilinear form into its six invariant parts."""
    arr = coerce_entries(theta)
    if arr.shape != (model.dim, model.dim):
        raise ShapeMismatch(f"expected a {model.dim} x {model.dim} form")
    exact = is_exact(arr)

    sym = _scale(arr + arr.T, 1, 2)
    alt = arr - sym
    sym_jj = apply_j(model, sym, (0, 1))
    alt_jj = apply_j(model, alt, (0, 1))
    sym_plus = _scale(sym + sym_jj, 1, 2)
    sym_minus = sym - sym_plus
    alt_plus = _scale(alt + alt_jj, 1, 2)
    alt_minus = alt - alt_plus

    dim = model.dim
    tr = np.trace(sym_plus)
    t_coeff = tr / Fraction(dim) if exact else tr / dim
    delta = identity_form(model, exact=exact)
    trace_part = delta * t_coeff

    omega = model.j_matrix if exact else model.j_matrix.astype(float)
    # <Omega, Omega> = 2n in the entrywise inner product
    pairing = np.sum(alt_plus * omega)
    o_coeff = pairing / Fraction(dim) if exact else pairing / dim
    omega_part = (coerce_entries(omega) if exact else omega) * o_coeff

    return FormDecomposition(
        model=model,
        trace_coefficient=t_coeff,
        omega_coefficient=o_coeff,
        trace_part=trace_part,
        sym_plus_traceless=sym_plus - trace_part,
        sym_minus=sym_minus,
        omega_part=omega_part,
        alt_plus_traceless=alt_plus - omega_part,
        alt_minus=alt_minus,
    )
