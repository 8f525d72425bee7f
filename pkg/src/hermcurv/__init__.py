"""Curvature-tensor decomposition and Hermitian metric-jet realization."""

from .corpus import (
    CASE_IDS,
    CaseResult,
    CorpusError,
    CorpusReport,
    ExampleCase,
    check_case,
    default_parameters,
    example,
    minimum_complex_dim,
    run_corpus,
)
from .curvature import (
    CurvatureError,
    CurvatureTensor,
    FormDecomposition,
    ShapeMismatch,
    SymmetryViolation,
    decompose_form,
    gray_defect,
    j_star,
    omega_twist,
    pullback,
    ricci,
    star_ricci,
    symmetrize,
    tau,
    tau_star,
    w7_defect,
)
from .linalg import (
    AmbientMismatch,
    InconsistentSystem,
    LinalgError,
    SubspaceBasis,
    min_norm_solve,
    nullspace,
    rank,
)
from .model import (
    DimensionTooSmall,
    HermitianModel,
    ModelError,
    canonicalize,
    kaehler_form,
    random_unitary,
    standard_model,
)
from .realize import (
    CoordinateChange,
    FirstJetNonzero,
    InvalidJet,
    InvalidTheta,
    KaehlerConditionFails,
    L_map,
    MetricJet,
    NotRealizable,
    RealizationReport,
    RealizeError,
    ThetaBasis,
    ThetaTensor,
    apply_change,
    curvature_at_origin,
    domega_at_origin,
    metric_from_theta,
    normalize_first_jet,
    realize,
    solve_realization,
)
from .tensorio import (
    TensorFile,
    TensorFileError,
    read_tensor_file,
    write_tensor_file,
)
from .tv import (
    COMPONENT_IDS,
    ComponentAbsent,
    TVDecomposition,
    TVError,
    build_A_basis,
    build_components,
    decompose,
    dims_table,
    gray_subspace,
    project,
)
from .verify import (
    VerificationReport,
    algebra_dim_formula,
    compliant_first_jet,
    expected_dims,
    levi_civita_curvature_at_origin,
    verify_all,
)

__version__ = "0.1.0"
