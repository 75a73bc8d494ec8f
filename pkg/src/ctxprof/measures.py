"""Degree-of-contextuality measures: thin orchestration over lp + simplex.

All three measures are faithful: their degree is zero exactly when the
coupling feasibility program is solvable, so a cheap exact feasibility check
(on the merged-copies space) short-circuits the degree computation for
noncontextual systems.  CNT2's distance value additionally equals zero iff
the target vector lies in the achievable polytope.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import lp as lpmod
from .lp import (
    DEFAULT_COLUMN_CAP,
    DEFAULT_SCHEMA,
    ColumnCapExceeded,
    RowSchema,
    build_cnt2_program,
    build_cnt3_program,
    build_cntf_program,
    build_feasibility_program,
    build_merged_cntf_program,
    build_merged_feasibility_program,
    decompose_components,
    merged_space,
)
from .model import System
from .simplex import LpSolution, SolveOptions, solve

MEASURES = ("cnt2", "cnt3", "cntf")

_ALIASES = {
    "cnt2": "cnt2", "cnt_2": "cnt2", "CNT2": "cnt2",
    "cnt3": "cnt3", "cnt_3": "cnt3", "CNT3": "cnt3",
    "cntf": "cntf", "CNTF": "cntf",
}


def canonical_measure(name: str) -> str:
    key = _ALIASES.get(name) or _ALIASES.get(name.upper()) or _ALIASES.get(name.lower())
    if key is None:
        raise ValueError(f"unknown measure {name!r}; choose from {MEASURES}")
    return key


@dataclass
class Options:
    """Evaluation options shared by measures, profiles, and the CLI."""

    mode: str = "exact"                     # "exact" | "float"
    schema: RowSchema = DEFAULT_SCHEMA
    cnt2_objective: str = "free-moments"    # calibrated default; "hard-atoms" variant
    decompose: bool = False
    merge: str = "auto"                     # "auto" | "always" | "never"
    max_columns: int = DEFAULT_COLUMN_CAP
    solver: SolveOptions = field(default_factory=SolveOptions)

    def with_(self, **kw) -> "Options":
        return replace(self, **kw)


@dataclass
class DegreeResult:
    measure: str
    value: Fraction | float
    mode: str
    schema: RowSchema
    stats: dict = field(default_factory=dict)


def _merge_wanted(options: Options, s: System) -> bool:
    if options.merge == "never":
        return False
    if options.schema.connection_values != "all":
        # the merged reduction relies on the off-diagonal coupling rows
        return options.merge == "always"
    if options.merge == "always":
        return True
    ms = merged_space(s)
    direct = lpmod.CouplingSpace.from_system(s).n_columns
    return ms.space.n_columns < direct


def _solve_feasibility(s: System, options: Options) -> LpSolution:
    if _merge_wanted(options, s) and options.schema.connection_values == "all":
        prog = build_merged_feasibility_program(s, options.schema, options.max_columns)
    else:
        prog = build_feasibility_program(s, options.schema, options.max_columns)
    # feasibility is a yes/no question; answer it exactly in both modes
    return solve(prog, "exact", options.solver)


def is_noncontextual(s: System, options: Options | None = None) -> bool:
    options = options or Options()
    if options.decompose:
        return all(
            is_noncontextual(c, options.with_(decompose=False))
            for c in decompose_components(s)
        )
    return _solve_feasibility(s, options).status == "optimal"


def _zero(options: Options) -> Fraction | float:
    return Fraction(0) if options.mode == "exact" else 0.0


def _feasibility_precheck_wanted(s: System, options: Options) -> bool:
    if options.schema.connection_values != "all":
        return False
    direct = lpmod.CouplingSpace.from_system(s).n_columns
    merged = merged_space(s).space.n_columns
    return merged <= 2**12 or direct > 2**16


def degree(s: System, measure: str, options: Options | None = None) -> DegreeResult:
    """Evaluate one measure; exact rational value in exact mode."""
    measure = canonical_measure(measure)
    options = options or Options()

    if options.decompose:
        return _degree_decomposed(s, measure, options)

    stats: dict = {}
    if _feasibility_precheck_wanted(s, options):
        if is_noncontextual(s, options):
            stats["shortcut"] = "feasible"
            return DegreeResult(measure, _zero(options), options.mode, options.schema, stats)
        stats["precheck"] = "contextual"

    try:
        result = _degree_direct(s, measure, options, stats)
    except ColumnCapExceeded:
        components = decompose_components(s)
        if len(components) <= 1:
            raise
        warnings.warn(
            f"coupling space exceeds the column cap; decomposing into "
            f"{len(components)} components",
            stacklevel=2,
        )
        return _degree_decomposed(s, measure, options)
    return result


def _degree_direct(s: System, measure: str, options: Options, stats: dict) -> DegreeResult:
    if measure == "cnt2":
        prog = build_cnt2_program(
            s, options.schema, options.cnt2_objective, options.max_columns
        )
        sol = solve(prog, options.mode, options.solver)
        value = sol.value
    elif measure == "cnt3":
        prog = build_cnt3_program(s, options.schema, options.max_columns)
        sol = solve(prog, options.mode, options.solver)
        value = sol.value - 1
    else:
        if _merge_wanted(options, s):
            prog = build_merged_cntf_program(s, options.max_columns)
            stats["merged"] = True
        else:
            prog = build_cntf_program(s, options.schema, options.max_columns)
        sol = solve(prog, options.mode, options.solver)
        value = 1 + sol.value
    if sol.status != "optimal":
        raise RuntimeError(
            f"{measure} program unexpectedly {sol.status}: it is solvable by construction"
        )
    stats.update(sol.stats)
    return DegreeResult(measure, value, options.mode, options.schema, stats)


def _degree_decomposed(s: System, measure: str, options: Options) -> DegreeResult:
    sub = options.with_(decompose=False)
    parts = [degree(c, measure, sub) for c in decompose_components(s)]
    values = [p.value for p in parts]
    if measure == "cnt2":
        total = sum(values, _zero(options))
    else:
        total = max(values) if values else _zero(options)
    stats = {
        "decomposed": len(parts),
        "component_values": values,
    }
    return DegreeResult(measure, total, options.mode, options.schema, stats)
