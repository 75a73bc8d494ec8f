import itertools
from fractions import Fraction as F

import pytest

from ctxprof import (
    ColumnCapExceeded,
    CouplingSpace,
    RowSchema,
    build_cnt2_program,
    build_cnt3_program,
    build_cntf_program,
    build_feasibility_program,
    build_merged_cntf_program,
    build_merged_feasibility_program,
    catalog,
    decompose_components,
    dump_program,
    solve,
    system_from_parts,
)
from ctxprof.lp import merged_space
from ctxprof.profiles import concatenate, concatenate_many


def test_coupling_space_enumeration_order():
    s = catalog.named("A1")
    space = CouplingSpace.from_system(s)
    assert space.variables == (
        ("1", "1"), ("2", "1"), ("2", "2"), ("3", "2"), ("3", "3"), ("1", "3"),
    )
    assert space.n_columns == 64
    # first variable most significant
    assert space.value_index(0b100000, 0) == 1
    assert space.value_index(0b000001, 5) == 1
    assert space.decode(0b101010) == (1, 0, 1, 0, 1, 0)


def test_atom_rows_select_one_row_per_context_per_column():
    s = catalog.named("A1")
    prog = build_feasibility_program(s)
    context_rows = [r for r in prog.rows if r.kind == "context"]
    per_context = {}
    for r in context_rows:
        per_context.setdefault(r.label.split(":")[0], []).append(r)
    for j in range(prog.space.n_columns):
        values = prog.space.decode(j)
        for cid, rows in per_context.items():
            hits = [
                r for r in rows if all(values[p] == v for p, v in r.conds)
            ]
            assert len(hits) == 1


def test_connection_rows_carry_maximal_coupling_targets():
    s = catalog.named("B'1")
    prog = build_feasibility_program(s)
    conn = {r.label: r.target for r in prog.rows if r.kind == "connection"}
    # question 1 lives in contexts 1 and 3 with marginals 13/25 and 12/25
    assert conn["1@1~3:++"] == F(12, 25)
    assert conn["1@1~3:+-"] == F(1, 25)
    assert conn["1@1~3:-+"] == F(0)
    assert conn["1@1~3:--"] == F(12, 25)


def test_first_value_schema_keeps_diagonal_row_only():
    s = catalog.named("A1")
    prog = build_feasibility_program(s, RowSchema("atoms", "first"))
    conn = [r for r in prog.rows if r.kind == "connection"]
    assert len(conn) == 3
    assert all(r.label.endswith("++") for r in conn)


def test_moment_basis_adds_mass_row():
    s = catalog.named("A1")
    prog = build_feasibility_program(s, RowSchema("moments", "all"))
    assert any(r.kind == "mass" for r in prog.rows)
    prog_atoms = build_feasibility_program(s)
    assert not any(r.kind == "mass" for r in prog_atoms.rows)


def test_cnt3_program_is_signed_with_mass_row():
    prog = build_cnt3_program(catalog.named("A1"))
    assert prog.signed and prog.col_cost == 1
    assert any(r.kind == "mass" for r in prog.rows)


def test_cntf_rows_are_le():
    prog = build_cntf_program(catalog.named("A1"))
    assert all(r.relation == "le" for r in prog.rows)
    assert prog.col_cost == -1


def test_cnt2_free_moments_has_only_mass_hard():
    prog = build_cnt2_program(catalog.named("A1"))
    assert [r.kind for r in prog.rows] == ["mass"]
    assert all(r.relation == "eq" for r in prog.soft_rows)
    kinds = {r.kind for r in prog.soft_rows}
    assert kinds == {"context", "connection"}


def test_cnt2_hard_atoms_variant():
    prog = build_cnt2_program(catalog.named("A1"), objective="hard-atoms")
    assert all(r.kind == "context" for r in prog.rows)
    assert all(r.kind == "connection" for r in prog.soft_rows)


def test_feasibility_status_matches_degrees():
    # feasible iff every degree is zero (builder-level cross-check)
    for sid in ("A0", "A5"):
        prog = build_feasibility_program(catalog.named(sid))
        sol = solve(prog)
        assert (sol.status == "optimal") == (sid == "A0")


def test_column_cap_enforced():
    s = catalog.named("H0")
    with pytest.raises(ColumnCapExceeded):
        build_feasibility_program(s, max_columns=2**10)


def test_nondichotomous_gate():
    s = system_from_parts(
        [("1", ["q"], {("a",): F(1, 3), ("b",): F(1, 3), ("c",): F(1, 3)})],
        domains={"q": ("a", "b", "c")},
    )
    with pytest.raises(ValueError):
        build_feasibility_program(s)
    prog = build_feasibility_program(s, allow_nondichotomous=True)
    assert prog.space.n_columns == 3


def test_decompose_components():
    a, b = catalog.named("A1"), catalog.named("B1")
    joined = concatenate(a, b)
    comps = decompose_components(joined)
    assert len(comps) == 2
    assert len(decompose_components(a)) == 1
    triple = concatenate_many([a, b, catalog.named("B2")])
    assert len(decompose_components(triple)) == 3


def test_merged_space_identifies_same_marginal_copies():
    # undisturbed: every question collapses to one class
    ms = merged_space(catalog.named("B1"))
    assert ms.space.n_columns == 2**4
    # disturbed: no two same-question copies share their marginals in B'1
    ms2 = merged_space(catalog.named("B'1"))
    assert ms2.space.n_columns == 2**9


def test_merged_programs_agree_with_direct():
    for sid in ("A0", "A1", "A'2", "B1", "B'2", "H'3"):
        s = catalog.named(sid)
        direct = solve(build_feasibility_program(s))
        merged = solve(build_merged_feasibility_program(s))
        assert direct.status == merged.status, sid
        d_cntf = 1 + solve(build_cntf_program(s)).value
        m_cntf = 1 + solve(build_merged_cntf_program(s)).value
        assert d_cntf == m_cntf, sid


def test_dump_program_lists_members():
    s = catalog.named("A0")
    prog = build_feasibility_program(s)
    text = dump_program(prog)
    lines = text.strip().splitlines()
    assert len(lines) == len(prog.rows)
    first = lines[0].split(" : ")
    assert len(first) == 2
    members = first[1].split()
    # an atom row of a two-variable context in a six-variable space covers
    # 2^4 columns
    assert len(members) == 16
