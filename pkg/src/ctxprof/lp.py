"""Coupling linear programs: incidence structure, targets, program variants.

Every program lives over the coupling atom space of a system: one column per
joint value assignment to all (question, context) variables, indexed in mixed
radix with the first variable most significant.  Rows are conjunctions of
(variable = value) conditions with 0/1 incidence, so the whole matrix is
Boolean and columns never need to be materialized.

Program variants:

* feasibility -- context rows and connection rows as equalities; feasible
  iff the system is noncontextual.
* cnt2 -- L1 distance to the polytope of achievable row-activity vectors.
  The calibrated default measures the distance in the moment basis with every
  row soft (context subset moments and connection min-coincidence moments)
  and only the total mass hard; `objective="hard-atoms"` instead holds
  context atom rows fixed and penalizes connection rows only.
* cnt3 -- all rows as equalities over a signed coupling; minimize total
  absolute mass; degree = optimum - 1.
* cntf -- all rows componentwise <=; maximize retained mass; degree =
  1 - optimum.

Connection rows describe the maximal coupling of each same-question context
pair: the diagonal (a, a) rows carry min(p(a), p'(a)) and the off-diagonal
rows the forced remainder.  The "first" value-set keeps only the
(one, one) row, which together with context equalities implies the rest.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .model import JointDistribution, System, format_fraction
from .moments import atoms_to_moments, max_coupling_joint, single_marginal


class ColumnCapExceeded(RuntimeError):
    """The coupling space is larger than the configured column cap."""


DEFAULT_COLUMN_CAP = 2**24


@dataclass(frozen=True)
class RowSchema:
    context_basis: str = "atoms"      # "atoms" | "moments"
    connection_values: str = "all"    # "all" | "first"

    def __post_init__(self):
        if self.context_basis not in ("atoms", "moments"):
            raise ValueError(f"unknown context basis {self.context_basis!r}")
        if self.connection_values not in ("all", "first"):
            raise ValueError(f"unknown connection value set {self.connection_values!r}")


DEFAULT_SCHEMA = RowSchema()


@dataclass(frozen=True)
class Row:
    kind: str                                  # "context" | "connection" | "mass"
    label: str
    conds: tuple[tuple[int, int], ...]         # (variable position, value index)
    target: Fraction
    relation: str = "eq"                       # "eq" | "le"


@dataclass(frozen=True)
class CouplingSpace:
    """Ordered (question, context) variables and their mixed-radix indexing."""

    variables: tuple[tuple[str, str], ...]
    radices: tuple[int, ...]

    def __post_init__(self):
        weights = []
        w = 1
        for r in reversed(self.radices):
            weights.append(w)
            w *= r
        object.__setattr__(self, "weights", tuple(reversed(weights)))
        object.__setattr__(self, "n_columns", w)
        object.__setattr__(
            self, "position", {v: i for i, v in enumerate(self.variables)}
        )

    @classmethod
    def from_system(cls, s: System) -> "CouplingSpace":
        variables = []
        radices = []
        for cid, dist in s.contexts.items():
            for q, dom in zip(dist.variables, dist.domains):
                variables.append((q, cid))
                radices.append(len(dom))
        return cls(tuple(variables), tuple(radices))

    def value_index(self, column: int, position: int) -> int:
        return (column // self.weights[position]) % self.radices[position]

    def decode(self, column: int) -> tuple[int, ...]:
        return tuple(self.value_index(column, i) for i in range(len(self.variables)))

    def question_blocks(self) -> list[tuple[str, tuple[int, ...]]]:
        """Variable positions grouped by question, in first-appearance order."""
        blocks: dict[str, list[int]] = {}
        for i, (q, _) in enumerate(self.variables):
            blocks.setdefault(q, []).append(i)
        return [(q, tuple(ps)) for q, ps in blocks.items()]


@dataclass(frozen=True)
class LinearProgram:
    """Near-standard-form program over a coupling space.

    Structural columns all share one objective coefficient `col_cost`; if
    `signed`, each structural column is split into a positive and negative
    part (both costed).  `soft_rows` enter the objective as L1 deviations.
    """

    name: str
    space: CouplingSpace
    rows: tuple[Row, ...]
    soft_rows: tuple[Row, ...] = ()
    col_cost: int = 0
    signed: bool = False

    @property
    def n_rows(self) -> int:
        return len(self.rows) + len(self.soft_rows)

    def column_entries(self, column: int) -> list[int]:
        """Indices (into rows + soft_rows) of the rows containing `column`."""
        out = []
        for r, row in enumerate(itertools.chain(self.rows, self.soft_rows)):
            if all(self.space.value_index(column, p) == v for p, v in row.conds):
                out.append(r)
        return out


def _check_cap(space: CouplingSpace, max_columns: int | None):
    cap = DEFAULT_COLUMN_CAP if max_columns is None else max_columns
    if space.n_columns > cap:
        raise ColumnCapExceeded(
            f"{space.n_columns} coupling atoms exceed the column cap {cap}; "
            "use decomposition or raise --lp-max-columns"
        )


def _require_dichotomous(s: System, allow_nondichotomous: bool):
    if allow_nondichotomous:
        return
    for cid, dist in s.contexts.items():
        for dom in dist.domains:
            if len(dom) != 2:
                raise ValueError(
                    f"context {cid} has a non-dichotomous domain {dom}; the solver "
                    "path is validated for dichotomous variables only "
                    "(pass allow_nondichotomous=True to override)"
                )


def context_atom_rows(space: CouplingSpace, s: System, relation: str = "eq") -> list[Row]:
    rows = []
    for cid, dist in s.contexts.items():
        positions = [space.position[(q, cid)] for q in dist.variables]
        for combo in itertools.product(*(range(len(d)) for d in dist.domains)):
            labels = tuple(dom[v] for dom, v in zip(dist.domains, combo))
            rows.append(
                Row(
                    "context",
                    f"{cid}:{''.join(labels)}",
                    tuple(zip(positions, combo)),
                    dist.prob(labels),
                    relation,
                )
            )
    return rows


def context_moment_rows(space: CouplingSpace, s: System, relation: str = "eq") -> list[Row]:
    rows = []
    for cid, dist in s.contexts.items():
        spec = atoms_to_moments(dist)
        positions = {q: space.position[(q, cid)] for q in dist.variables}
        for r in range(1, len(dist.variables) + 1):
            for subset in itertools.combinations(dist.variables, r):
                rows.append(
                    Row(
                        "context",
                        f"{cid}:m[{','.join(subset)}]",
                        tuple((positions[q], 0) for q in subset),
                        spec.moment(subset),
                        relation,
                    )
                )
    return rows


def connection_pairs(s: System) -> list[tuple[str, str, str]]:
    """(question, context, context) for every unordered same-question pair."""
    members: dict[str, list[str]] = {}
    for cid, dist in s.contexts.items():
        for q in dist.variables:
            members.setdefault(q, []).append(cid)
    out = []
    for q in sorted(members):
        for c1, c2 in itertools.combinations(members[q], 2):
            out.append((q, c1, c2))
    return out


def connection_rows(
    space: CouplingSpace,
    s: System,
    values: str = "all",
    relation: str = "eq",
) -> list[Row]:
    rows = []
    for q, c1, c2 in connection_pairs(s):
        p1 = single_marginal(s.context(c1), q)
        p2 = single_marginal(s.context(c2), q)
        joint = max_coupling_joint(p1, p2)
        dom = p1.domains[0]
        pos1 = space.position[(q, c1)]
        pos2 = space.position[(q, c2)]
        if values == "first":
            combos = [(dom[0], dom[0])]
        else:
            combos = [(a, b) for a in dom for b in dom]
        for a, b in combos:
            rows.append(
                Row(
                    "connection",
                    f"{q}@{c1}~{c2}:{a}{b}",
                    ((pos1, dom.index(a)), (pos2, dom.index(b))),
                    joint[(a, b)],
                    relation,
                )
            )
    return rows


def mass_row(target: Fraction = Fraction(1), relation: str = "eq") -> Row:
    return Row("mass", "mass", (), target, relation)


def _dedup(rows: Iterable[Row]) -> tuple[Row, ...]:
    seen = set()
    out = []
    for row in rows:
        key = (frozenset(row.conds), row.relation, row.target)
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
    return tuple(out)


def build_feasibility_program(
    s: System,
    schema: RowSchema = DEFAULT_SCHEMA,
    max_columns: int | None = None,
    allow_nondichotomous: bool = False,
) -> LinearProgram:
    _require_dichotomous(s, allow_nondichotomous)
    space = CouplingSpace.from_system(s)
    _check_cap(space, max_columns)
    if schema.context_basis == "atoms":
        rows = context_atom_rows(space, s)
    else:
        rows = context_moment_rows(space, s) + [mass_row()]
    rows += connection_rows(space, s, schema.connection_values)
    return LinearProgram("feasibility", space, _dedup(rows))


def build_cnt2_program(
    s: System,
    schema: RowSchema = DEFAULT_SCHEMA,
    objective: str = "free-moments",
    max_columns: int | None = None,
    allow_nondichotomous: bool = False,
) -> LinearProgram:
    """L1-distance program.

    objective="free-moments" (calibrated default): every moment-basis row is
    soft, only total mass is hard.  objective="hard-atoms": context atom rows
    are hard equalities and only the connection min-coincidence rows are soft.
    """
    _require_dichotomous(s, allow_nondichotomous)
    space = CouplingSpace.from_system(s)
    _check_cap(space, max_columns)
    conn = connection_rows(space, s, "first")
    if objective == "free-moments":
        hard: list[Row] = [mass_row()]
        soft = context_moment_rows(space, s) + conn
    elif objective == "hard-atoms":
        hard = context_atom_rows(space, s)
        soft = conn
    else:
        raise ValueError(f"unknown cnt2 objective {objective!r}")
    return LinearProgram("cnt2", space, _dedup(hard), _dedup(soft))


def build_cnt3_program(
    s: System,
    schema: RowSchema = DEFAULT_SCHEMA,
    max_columns: int | None = None,
    allow_nondichotomous: bool = False,
) -> LinearProgram:
    _require_dichotomous(s, allow_nondichotomous)
    space = CouplingSpace.from_system(s)
    _check_cap(space, max_columns)
    if schema.context_basis == "atoms":
        rows = context_atom_rows(space, s)
    else:
        rows = context_moment_rows(space, s)
    rows += connection_rows(space, s, schema.connection_values)
    rows.append(mass_row())
    return LinearProgram("cnt3", space, _dedup(rows), col_cost=1, signed=True)


def build_cntf_program(
    s: System,
    schema: RowSchema = DEFAULT_SCHEMA,
    max_columns: int | None = None,
    allow_nondichotomous: bool = False,
) -> LinearProgram:
    _require_dichotomous(s, allow_nondichotomous)
    space = CouplingSpace.from_system(s)
    _check_cap(space, max_columns)
    if schema.context_basis == "atoms":
        rows = context_atom_rows(space, s, "le")
    else:
        rows = context_moment_rows(space, s, "le") + [mass_row(relation="le")]
    rows += connection_rows(space, s, schema.connection_values, "le")
    return LinearProgram("cntf", space, _dedup(rows), col_cost=-1)


def decompose_components(s: System) -> list[System]:
    """Split into connected components of the contexts-sharing-a-question graph."""
    ids = s.context_ids()
    parent = {c: c for c in ids}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    by_question: dict[str, list[str]] = {}
    for cid, dist in s.contexts.items():
        for q in dist.variables:
            by_question.setdefault(q, []).append(cid)
    for cids in by_question.values():
        for other in cids[1:]:
            ra, rb = find(cids[0]), find(other)
            if ra != rb:
                parent[rb] = ra
    groups: dict[str, dict] = {}
    for cid in ids:
        groups.setdefault(find(cid), {})[cid] = s.contexts[cid]
    return [System(g) for g in groups.values()]


# ---------------------------------------------------------------------------
# Merged-copies reduction.
#
# In the equality feasibility program, two same-question variables with
# identical one-variable marginals are forced equal almost surely (their
# coincidence rows sum to 1); in the componentwise-<= program the
# off-diagonal maximal-coupling rows have target 0 and force the same.  Both
# programs are therefore equivalent to their image on the quotient space
# where such copies are identified.  No such forcing exists for cnt2/cnt3.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MergedSpace:
    space: CouplingSpace                       # over class representatives
    class_of: dict                             # (question, context) -> class position
    class_marg: tuple                          # class position -> marginal JointDistribution


def merged_space(s: System) -> MergedSpace:
    classes: dict[tuple, int] = {}
    reps: list[tuple[str, str]] = []
    radices: list[int] = []
    margs: list[JointDistribution] = []
    class_of: dict[tuple[str, str], int] = {}
    for cid, dist in s.contexts.items():
        for q in dist.variables:
            m = single_marginal(dist, q)
            key = (q, m.domains[0], tuple(m.prob((v,)) for v in m.domains[0]))
            if key not in classes:
                classes[key] = len(reps)
                reps.append((q, cid))
                radices.append(len(m.domains[0]))
                margs.append(m)
            class_of[(q, cid)] = classes[key]
    return MergedSpace(
        CouplingSpace(tuple(reps), tuple(radices)), class_of, tuple(margs)
    )


def _merged_rows(s: System, ms: MergedSpace, values: str, relation: str) -> tuple[Row, ...]:
    rows: list[Row] = []
    for cid, dist in s.contexts.items():
        positions = [ms.class_of[(q, cid)] for q in dist.variables]
        for combo in itertools.product(*(range(len(d)) for d in dist.domains)):
            labels = tuple(dom[v] for dom, v in zip(dist.domains, combo))
            rows.append(
                Row(
                    "context",
                    f"{cid}:{''.join(labels)}",
                    tuple(zip(positions, combo)),
                    dist.prob(labels),
                    relation,
                )
            )
    by_question: dict[str, list[int]] = {}
    for (q, _), cls in ms.class_of.items():
        by_question.setdefault(q, [])
        if cls not in by_question[q]:
            by_question[q].append(cls)
    for q in sorted(by_question):
        for cls1, cls2 in itertools.combinations(by_question[q], 2):
            m1, m2 = ms.class_marg[cls1], ms.class_marg[cls2]
            joint = max_coupling_joint(m1, m2)
            dom = m1.domains[0]
            combos = [(dom[0], dom[0])] if values == "first" else [
                (a, b) for a in dom for b in dom
            ]
            for a, b in combos:
                rows.append(
                    Row(
                        "connection",
                        f"{q}#{cls1}~{cls2}:{a}{b}",
                        ((cls1, dom.index(a)), (cls2, dom.index(b))),
                        joint[(a, b)],
                        relation,
                    )
                )
    return _dedup(rows)


def build_merged_feasibility_program(
    s: System, schema: RowSchema = DEFAULT_SCHEMA, max_columns: int | None = None
) -> LinearProgram:
    ms = merged_space(s)
    _check_cap(ms.space, max_columns)
    return LinearProgram(
        "feasibility-merged", ms.space, _merged_rows(s, ms, schema.connection_values, "eq")
    )


def build_merged_cntf_program(
    s: System, max_columns: int | None = None
) -> LinearProgram:
    # the reduction needs the off-diagonal <= rows, hence always "all" values
    ms = merged_space(s)
    _check_cap(ms.space, max_columns)
    return LinearProgram(
        "cntf-merged", ms.space, _merged_rows(s, ms, "all", "le"), col_cost=-1
    )


def dump_program(lp: LinearProgram, max_columns: int = 2**16) -> str:
    """Sparse text dump: one line per row "kind label relation target : columns"."""
    if lp.space.n_columns > max_columns:
        raise ColumnCapExceeded(
            f"refusing to enumerate {lp.space.n_columns} columns in a dump"
        )
    lines = []
    for row in itertools.chain(lp.rows, lp.soft_rows):
        members = [
            str(j)
            for j in range(lp.space.n_columns)
            if all(lp.space.value_index(j, p) == v for p, v in row.conds)
        ]
        rel = {"eq": "=", "le": "<="}[row.relation]
        soft = " soft" if row in lp.soft_rows else ""
        lines.append(
            f"{row.kind}{soft} {row.label} {rel} {format_fraction(row.target)} : "
            + " ".join(members)
        )
    return "\n".join(lines) + "\n"
