"""Exact cohomology dimensions (quasi-Poisson, Hochschild, Lie) of finite-dimensional
Poisson algebras over Q."""

from .algebra import (
    FiniteDimAlgebra,
    LieBracketTable,
    LieModuleStructure,
    PoissonAlgebra,
    QuasiPoissonModule,
    Quiver,
    builtin_examples,
    matrix_algebra,
    path_algebra,
    self_module,
    standard_poisson,
    trivial_poisson,
    validate_module,
    validate_poisson,
)
from .engine import (
    BettiTable,
    CrossCheckReport,
    betti_hh,
    betti_hl,
    betti_hq,
    hq0_direct,
    hq1_direct,
    kunneth_check,
    ses_check,
    standard_hq1_check,
    tensor_check,
    truncated_betti,
)
from .errors import AxiomError, HypothesisError, ParseError, QPCohError, ResourceError, StructureError
from .io import TOOL_VERSION as __version__, parse_algebra, serialize_algebra
