"""All-up verification: recompute the library's advertised facts at one size.

Every check recomputes a property from scratch and reports an outcome row
instead of raising, so a report always covers the full list.  Exact checks
compare rationals for equality; sampling checks run in float mode under an
explicit tolerance.  The heavier sampling checks are scoped to the sizes
where they finish quickly (the basis round trip and equivariance sampling
up to three complex dimensions, the jet normalization sweep at two).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curvature import (
    CurvatureTensor,
    apply_j,
    gray_defect,
    max_abs,
    pullback,
    star_ricci,
    transform_slots,
)
from .linalg import primitive_rows
from .model import HermitianModel, random_unitary, standard_model
from .realize import (
    MetricJet,
    NotRealizable,
    ThetaBasis,
    curvature_at_origin,
    domega_at_origin,
    normalize_first_jet,
    realize,
)
from .corpus import run_corpus
from .tv import COMPONENT_IDS, build_components, dims_table, gray_subspace, project

__all__ = [
    "CheckOutcome",
    "VerificationReport",
    "expected_dims",
    "check_dims",
    "check_orthogonality",
    "check_gray_duality",
    "check_w7_obstruction",
    "check_round_trip",
    "check_corpus",
    "check_equivariance",
    "check_first_jet_normalization",
    "check_star_ricci_on_w3",
    "levi_civita_curvature_at_origin",
    "compliant_first_jet",
    "verify_all",
]


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True, eq=False)
class VerificationReport:
    n: int
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"[{status}] {c.name}"
            if c.detail:
                line += f": {c.detail}"
            out.append(line)
        return out


def expected_dims(n: int) -> dict:
    """Closed-form component dimensions at complex dimension n."""
    return {
        "W1": 1,
        "W2": n * n - 1,
        "W3": n * n * (n - 1) * (n + 3) // 4,
        "W4": 1,
        "W5": 0 if n == 2 else n * n - 1,
        "W6": 0 if n <= 3 else n * n * (n + 1) * (n - 3) // 4,
        "W7": n * n * (n * n - 1) // 6,
        "W8": n * n + n,
        "W9": n * n - n,
        "W10": 2 * n * n * (n * n - 4) // 3,
    }


def algebra_dim_formula(n: int) -> int:
    m = 2 * n
    return m * m * (m * m - 1) // 12


# ---------------------------------------------------------------------------
# exact structural checks

def check_dims(model: HermitianModel) -> CheckOutcome:
    table = dims_table(model)
    want = expected_dims(model.n)
    got = dict(table.rows)
    bad = {k: (got[k], want[k]) for k in COMPONENT_IDS if got[k] != want[k]}
    total_ok = (table.total == table.algebra_dim
                and table.algebra_dim == algebra_dim_formula(model.n))
    if bad or not total_ok:
        return CheckOutcome(
            "dimension table", False,
            f"mismatches {bad}, total {table.total} vs {table.algebra_dim}")
    row = ", ".join(f"{k}={v}" for k, v in table.rows)
    return CheckOutcome("dimension table", True, f"{row}; total {table.total}")


def check_orthogonality(model: HermitianModel) -> CheckOutcome:
    """Component subspaces are pairwise orthogonal and their dims fill the space."""
    cs = build_components(model)
    w = cs.algebra.norms.astype(object)
    mats = {}
    for k in COMPONENT_IDS:
        rows = primitive_rows(cs.spaces[k].matrix()) if cs.spaces[k].dim else []
        mats[k] = np.array(rows, dtype=object) if rows else None
    total = sum(cs.spaces[k].dim for k in COMPONENT_IDS)
    if total != cs.algebra.dim:
        return CheckOutcome(
            "completeness and orthogonality", False,
            f"dims sum to {total}, algebra has {cs.algebra.dim}")
    keys = [k for k in COMPONENT_IDS if mats[k] is not None]
    for a in range(len(keys)):
        ma = mats[keys[a]] * w
        for b in range(a + 1, len(keys)):
            prods = ma @ mats[keys[b]].T
            if np.any(prods != 0):
                return CheckOutcome(
                    "completeness and orthogonality", False,
                    f"{keys[a]} not orthogonal to {keys[b]}")
    return CheckOutcome(
        "completeness and orthogonality", True,
        f"{len(keys)} nonzero components, all cross pairs orthogonal")


def check_gray_duality(model: HermitianModel) -> CheckOutcome:
    """The Gray kernel equals the orthogonal complement of W7 (mutual containment)."""
    cs = build_components(model)
    gray = gray_subspace(model)
    want_dim = cs.algebra.dim - cs.spaces["W7"].dim
    if gray.dim != want_dim:
        return CheckOutcome(
            "gray duality", False,
            f"gray kernel dim {gray.dim}, complement of W7 needs {want_dim}")
    perp = None
    for k in COMPONENT_IDS:
        if k == "W7" or cs.spaces[k].dim == 0:
            continue
        perp = cs.spaces[k] if perp is None else perp.span_union(cs.spaces[k])
    if not gray.equals(perp):
        return CheckOutcome(
            "gray duality", False, "gray kernel differs from the W7 complement")
    return CheckOutcome(
        "gray duality", True, f"kernel dim {gray.dim} equals the W7 complement")


def check_w7_obstruction(model: HermitianModel) -> CheckOutcome:
    """Every W7 basis vector has gray defect exactly 8x itself and fails realize."""
    cs = build_components(model)
    alg = cs.algebra
    space = cs.spaces["W7"]
    for i, coords in enumerate(space.vectors()):
        a = CurvatureTensor.from_array(model, alg.from_coords(coords))
        defect = gray_defect(a)
        if max_abs(defect - 8 * a.entries) != 0:
            return CheckOutcome(
                "w7 obstruction", False, f"defect of basis vector {i} is not 8x")
        try:
            realize(a)
        except NotRealizable:
            pass
        else:
            return CheckOutcome(
                "w7 obstruction", False, f"basis vector {i} realized unexpectedly")
    return CheckOutcome(
        "w7 obstruction", True,
        f"all {space.dim} basis vectors: defect 8x, realization refused")


def check_round_trip(model: HermitianModel) -> CheckOutcome:
    """Realize every Gray-kernel basis vector and reproduce it exactly."""
    cs = build_components(model)
    alg = cs.algebra
    gray = gray_subspace(model)
    for i, coords in enumerate(gray.vectors()):
        a = CurvatureTensor.from_array(model, alg.from_coords(coords))
        theta, jet, report = realize(a)
        bad = None
        if report.round_trip_residual != 0:
            bad = "curvature not reproduced"
        elif not jet.first_jet_vanishes():
            bad = "first jet nonzero"
        elif max_abs(domega_at_origin(jet)) != 0:
            bad = "fundamental form not closed"
        elif max_abs(jet.h - apply_j(model, jet.h, (0, 1))) != 0:
            bad = "h breaks J-compatibility"
        elif max_abs(jet.q - apply_j(model, jet.q, (0, 1))) != 0:
            bad = "q breaks J-compatibility"
        if bad:
            return CheckOutcome(
                "gray basis realization round trip", False,
                f"basis vector {i}: {bad}")
    return CheckOutcome(
        "gray basis realization round trip", True,
        f"all {gray.dim} Gray-kernel basis vectors realized exactly")


def check_corpus(model: HermitianModel) -> CheckOutcome:
    report = run_corpus(model)
    ran = len(report.results)
    if not report.passed:
        fails = "; ".join(
            f"{case.id}: {chk.label}" for case, chk in report.failures())
        return CheckOutcome("corpus", False, fails)
    return CheckOutcome(
        "corpus", True,
        f"{ran} case runs passed, {len(report.skipped)} skipped for size")


def check_star_ricci_on_w3(model: HermitianModel) -> CheckOutcome:
    """Record whether the star-Ricci contraction vanishes on the W3 component."""
    cs = build_components(model)
    alg = cs.algebra
    worst = Fraction(0)
    for coords in cs.spaces["W3"].vectors():
        a = CurvatureTensor.from_array(model, alg.from_coords(coords))
        worst = max(worst, max_abs(star_ricci(a)))
    fact = "vanishes identically" if worst == 0 else f"max entry {worst}"
    return CheckOutcome(
        "star ricci on W3", True,
        f"computed over all {cs.spaces['W3'].dim} basis vectors: {fact}")


# ---------------------------------------------------------------------------
# float sampling checks

def check_equivariance(model: HermitianModel, *, seed: int = 0,
                       unitary_samples: int = 50, tensor_samples: int = 20,
                       tolerance: float = 1e-8,
                       gray_tolerance: float = 1e-10) -> CheckOutcome:
    """Projections and the gray defect commute with J-compatible rotations."""
    cs = build_components(model)
    alg = cs.algebra
    rng = np.random.default_rng(seed)
    tensors = []
    for _ in range(tensor_samples):
        coords = rng.standard_normal(alg.dim)
        tensors.append(CurvatureTensor.from_array(
            model, alg.from_coords(coords), validate=False))
    keys = [k for k in COMPONENT_IDS if cs.spaces[k].dim]
    worst_proj = 0.0
    worst_gray = 0.0
    for u_index in range(unitary_samples):
        u = random_unitary(model, seed * 1000 + u_index)
        for a in tensors:
            ua = pullback(a, u)
            for k in keys:
                lhs = project(ua, k).entries
                rhs = transform_slots(project(a, k).entries, u)
                worst_proj = max(worst_proj, float(np.max(np.abs(lhs - rhs))))
            dg = np.abs(gray_defect(ua) - transform_slots(gray_defect(a), u))
            worst_gray = max(worst_gray, float(np.max(dg)))
    ok = worst_proj <= tolerance and worst_gray <= gray_tolerance
    return CheckOutcome(
        "equivariance sampling", ok,
        f"{unitary_samples} rotations x {tensor_samples} tensors: "
        f"projection error {worst_proj:.2e} (tol {tolerance:.0e}), "
        f"gray error {worst_gray:.2e} (tol {gray_tolerance:.0e})")


# ---------------------------------------------------------------------------
# first-jet normalization against an independent curvature oracle

def levi_civita_curvature_at_origin(jet: MetricJet) -> np.ndarray:
    """Textbook Christoffel-symbol curvature of the jet, evaluated at zero.

    Shares no code with the linearized path: lowered Christoffel symbols and
    their first derivatives come straight from the jet coefficients, the
    inverse-metric correction enters through the first-order term, and the
    quadratic Gamma x Gamma terms are summed explicitly.
    """
    dim = jet.model.dim
    h, q = jet.h, jet.q
    exact = jet.is_exact
    half = Fraction(1, 2) if exact else 0.5
    zero = Fraction(0) if exact else 0.0
    gamma = np.full((dim, dim, dim), zero, dtype=object if exact else float)
    for i in range(dim):
        for j in range(dim):
            for l in range(dim):
                gamma[i, j, l] = half * (h[j][l][i] + h[i][l][j] - h[i][j][l])
    out = np.full((dim,) * 4, zero, dtype=object if exact else float)
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    # d_i Gamma_{jk,l} - d_j Gamma_{ik,l} with the
                    # inverse-metric correction at the origin
                    s = (q[j][l][i][k] + q[k][l][i][j] - q[j][k][i][l]
                         - q[i][l][j][k] - q[k][l][j][i] + q[i][k][j][l])
                    for mm in range(dim):
                        s -= h[l][mm][i] * gamma[j, k, mm]
                        s += h[l][mm][j] * gamma[i, k, mm]
                        s += gamma[j, k, mm] * gamma[i, mm, l]
                        s -= gamma[i, k, mm] * gamma[j, mm, l]
                    out[i, j, k, l] = s
    return out


def compliant_first_jet(model: HermitianModel, d_re, d_im) -> np.ndarray:
    """First-derivative block whose fundamental two-form is closed at zero.

    d_re and d_im are the real and imaginary parts of the complex derivative
    coefficients, each symmetric under swapping its outer slots; the real
    scatter below is the translation of that symmetry into metric data.
    """
    n = model.n
    d_re = np.asarray(d_re, dtype=object)
    d_im = np.asarray(d_im, dtype=object)
    if d_re.shape != (n, n, n) or d_im.shape != (n, n, n):
        raise ValueError(f"coefficient blocks must have shape {(n, n, n)}")
    for name, arr in (("d_re", d_re), ("d_im", d_im)):
        if max_abs(arr - arr.transpose(2, 1, 0)) != 0:
            raise ValueError(f"{name} must be symmetric in its outer slots")
    h = np.full((2 * n,) * 3, Fraction(0), dtype=object)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                axc = 2 * (d_re[a][b][c] + d_re[b][a][c])
                ayc = -2 * (d_im[a][b][c] + d_im[b][a][c])
                bxc = 2 * (d_im[a][b][c] - d_im[b][a][c])
                byc = 2 * (d_re[a][b][c] - d_re[b][a][c])
                h[a, b, c] = axc
                h[n + a, n + b, c] = axc
                h[a, b, n + c] = ayc
                h[n + a, n + b, n + c] = ayc
                h[a, n + b, c] = bxc
                h[n + b, a, c] = bxc
                h[a, n + b, n + c] = byc
                h[n + b, a, n + c] = byc
    return h


def _random_compliant_jet(model: HermitianModel, rng) -> MetricJet:
    n = model.n
    def block():
        raw = np.array(
            [Fraction(int(v)) for v in rng.integers(-3, 4, size=n ** 3)],
            dtype=object).reshape(n, n, n)
        return raw + raw.transpose(2, 1, 0)
    h = compliant_first_jet(model, block(), block())
    basis = ThetaBasis(model)
    coeffs = [Fraction(int(v)) for v in rng.integers(-2, 3, size=basis.dim)]
    q = basis.from_coords(np.array(coeffs, dtype=object))
    return MetricJet.from_arrays(model, h, q)


def check_first_jet_normalization(model: HermitianModel, *, seed: int = 0,
                                  samples: int = 100) -> CheckOutcome:
    """Random closed-form jets: normalization kills h and keeps the curvature."""
    rng = np.random.default_rng(seed)
    for trial in range(samples):
        jet = _random_compliant_jet(model, rng)
        if max_abs(domega_at_origin(jet)) != 0:
            return CheckOutcome(
                "first jet normalization", False,
                f"trial {trial}: constructed jet is not closed at the origin")
        change, flat = normalize_first_jet(jet)
        if not flat.first_jet_vanishes():
            return CheckOutcome(
                "first jet normalization", False,
                f"trial {trial}: first derivatives survive normalization")
        got = curvature_at_origin(flat).entries
        want = levi_civita_curvature_at_origin(jet)
        if max_abs(got - want) != 0:
            return CheckOutcome(
                "first jet normalization", False,
                f"trial {trial}: curvature disagrees with the direct oracle")
    return CheckOutcome(
        "first jet normalization", True,
        f"{samples} random closed jets: h removed exactly, "
        "curvature matches the Christoffel oracle")


# ---------------------------------------------------------------------------
# the all-up report

def verify_all(n: int, *, seed: int = 0, tolerance: float = 1e-8,
               gray_tolerance: float = 1e-10, unitary_samples: int = 50,
               tensor_samples: int = 20, jet_samples: int = 100) -> VerificationReport:
    model = standard_model(n)
    checks = [
        check_dims(model),
        check_orthogonality(model),
        check_gray_duality(model),
        check_w7_obstruction(model),
    ]
    if n <= 3:
        checks.append(check_round_trip(model))
    checks.append(check_corpus(model))
    checks.append(check_star_ricci_on_w3(model))
    if n <= 3:
        checks.append(check_equivariance(
            model, seed=seed, unitary_samples=unitary_samples,
            tensor_samples=tensor_samples, tolerance=tolerance,
            gray_tolerance=gray_tolerance))
    if n == 2:
        checks.append(check_first_jet_normalization(
            model, seed=seed, samples=jet_samples))
    return VerificationReport(n=n, checks=tuple(checks))
