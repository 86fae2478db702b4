"""Pointwise verification of Jacobi-operator identities for real
hypersurfaces in the complex quadric, exactly over Q(sqrt 2) and in floats."""

from .fieldkit import QSqrt2, SQRT2, commutator, frobenius_norm_sq, residual, sym_eigen
from .hypersurface import (
    EigenStructure,
    HypersurfacePoint,
    TubeSpec,
    build_type_b_tube,
    eigenstructure,
    induced_curvature,
    is_contact,
    is_hopf,
    jacobi_rx,
    jacobi_rx_gauss,
    make_hypersurface_point,
    normal_jacobi,
    normal_jacobi_projected,
    structure_jacobi,
    structure_jacobi_gauss,
)
from .quadric import (
    Classification,
    Conjugation,
    QuadricPoint,
    SingularKind,
    ambient_curvature,
    ambient_jacobi,
    build_quadric_point,
    classify_singularity,
    conjugation_at,
    conjugation_from_cs,
    singular_vector,
)
from .verifier import CheckReport, RunConfig, SuiteResult, run_suite

__version__ = "0.1.0"
