"""Verification toolkit for the curvature operator of the second kind.

Pointwise linear algebra for algebraic curvature tensors, spectra of the
induced operator on trace-free symmetric two-tensors, the fractional
eigenvalue cone condition with its exact dimensional thresholds, the
Bochner-chain inequalities, and the constrained cubic minimization that
backs the rigidity verdict.
"""

from .bochner import (
    BochnerReport,
    NonEinsteinError,
    Verdict,
    classify_einstein,
    delta_r_inner,
    delta_r_inner_low_dim,
    delta_r_lower_bound,
    einstein_defect,
    weighted_weyl_bound,
)
from .cone import (
    ConeParams,
    ConeVerdict,
    NotApplicableError,
    cone_membership,
    partial_sum,
    theta_in_window,
    theta_threshold,
)
from .extremal import (
    CriticalPoint,
    ExtremalReport,
    FeasibleSet,
    InfeasibleFamilyError,
    boundary_critical,
    boundary_profile,
    cubic_objective,
    enumerate_minimum,
    interior_critical,
    multistart_descent,
)
from .operators import (
    JacobiConvergenceError,
    SecondKindOperator,
    Spectrum,
    TracefreeBasis,
    build_first_kind,
    build_second_kind,
    dim_tracefree,
    eigen_matrices,
    spectrum,
    sym_action,
    symmetric_eigen,
    tracefree_basis,
    weyl_action_norms,
)
from .tensors import (
    CurvatureTensor,
    SymmetryDefectError,
    TensorFormatError,
    WeylSplit,
    bianchi_project,
    from_table,
    kulkarni_nomizu,
    load_tensor,
    metric,
    random_einstein,
    ricci,
    save_tensor,
    scalar_curvature,
    symmetry_check,
    tensor_norm_sq,
    weyl_decompose,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
