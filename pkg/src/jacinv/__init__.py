"""Exact inversion of polynomial maps with constant Jacobian determinant."""

from .blocks import (
    BlockMatrix,
    block_inverse,
    block_size,
    build_block,
    det_block,
    det_exponent,
    det_pattern,
    monomials,
    quadratic_system_matrix,
)
from .errors import (
    ConstantTermError,
    DegreeNotComputed,
    InternalInconsistency,
    InvalidStep,
    JacinvError,
    MapSyntaxError,
    NonConstantJacobian,
    OrthogonalityViolated,
    SingularLinearPart,
    VariableCountMismatch,
    ZeroLeadingCoefficient,
)
from .generators import (
    ElementaryStep,
    LinearStep,
    TameProgram,
    bcw_rank_one_pair,
    gen_bcw_rank_one,
    gen_section42,
    quadratic_tame_program,
    random_bcw_rank_one,
    random_section42,
    random_tame_program,
    realize_tame,
    sample_tame,
)
from .inverter import (
    InversionResult,
    ResiduumVector,
    Status,
    cofactor_matrix,
    default_cap,
    degree_relation_diagnostic,
    invert_block_scheme,
    invert_oracle,
    invert_special_42,
    residuum_report,
    verify_inverse,
)
from .jacobi import JacobiReport, check_jacobi, require_unit_jacobian
from .matrix import RationalMatrix
from .poly import (
    PolyMap,
    Polynomial,
    compose,
    homogeneous_part,
    jacobian_det,
    partial_derivative,
    ring_add,
    ring_mul,
)
from .textformat import MapDocument, format_map, format_polynomial, parse_map

__version__ = "0.1.0"
