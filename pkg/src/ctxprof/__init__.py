"""Degrees, levels, and profiles of contextuality with exact rational LP."""

from .model import (
    Connection,
    JointDistribution,
    System,
    ValidationReport,
    as_fraction,
    connections_of,
    format_fraction,
    relabel,
    system_from_parts,
    validate_system,
)
from .moments import (
    MomentSpec,
    NotADistribution,
    atoms_to_moments,
    marginalize,
    max_coupling_joint,
    max_coupling_target,
    moments_to_atoms,
)
from .levels import LevelRepresentation, level_representation, max_level
from .lp import (
    DEFAULT_COLUMN_CAP,
    DEFAULT_SCHEMA,
    ColumnCapExceeded,
    CouplingSpace,
    LinearProgram,
    Row,
    RowSchema,
    build_cnt2_program,
    build_cnt3_program,
    build_cntf_program,
    build_feasibility_program,
    build_merged_cntf_program,
    build_merged_feasibility_program,
    decompose_components,
    dump_program,
)
from .simplex import LpSolution, SolveOptions, SolverError, row_activity, solve, verify_farkas
from .measures import MEASURES, DegreeResult, Options, canonical_measure, degree, is_noncontextual
from .profiles import (
    ConcatReport,
    IncrementClass,
    IncrementPurityError,
    Profile,
    classify_increment,
    concat_analysis,
    concatenate,
    concatenate_many,
    profile,
)
from . import catalog, serialize, tables

__version__ = "0.1.0"

__all__ = [
    "Connection", "JointDistribution", "System", "ValidationReport",
    "as_fraction", "connections_of", "format_fraction", "relabel",
    "system_from_parts", "validate_system",
    "MomentSpec", "NotADistribution", "atoms_to_moments", "marginalize",
    "max_coupling_joint", "max_coupling_target", "moments_to_atoms",
    "LevelRepresentation", "level_representation", "max_level",
    "DEFAULT_COLUMN_CAP", "DEFAULT_SCHEMA", "ColumnCapExceeded",
    "CouplingSpace", "LinearProgram", "Row", "RowSchema",
    "build_cnt2_program", "build_cnt3_program", "build_cntf_program",
    "build_feasibility_program", "build_merged_cntf_program",
    "build_merged_feasibility_program", "decompose_components", "dump_program",
    "LpSolution", "SolveOptions", "SolverError", "row_activity", "solve",
    "verify_farkas",
    "MEASURES", "DegreeResult", "Options", "canonical_measure", "degree",
    "is_noncontextual",
    "ConcatReport", "IncrementClass", "IncrementPurityError", "Profile",
    "classify_increment", "concat_analysis", "concatenate", "concatenate_many",
    "profile",
    "catalog", "serialize", "tables",
]
