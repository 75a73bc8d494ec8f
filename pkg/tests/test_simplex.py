import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxprof import (
    CouplingSpace,
    LinearProgram,
    Row,
    SolveOptions,
    build_cnt3_program,
    build_cntf_program,
    build_feasibility_program,
    catalog,
    row_activity,
    solve,
    verify_farkas,
)


def toy_space(n_vars=3):
    return CouplingSpace(
        tuple((f"q{i}", "c") for i in range(n_vars)), (2,) * n_vars
    )


def eq_row(space, conds, target, kind="context", label=""):
    return Row(kind, label or str(conds), tuple(conds), F(target), "eq")


def test_trivial_maximize():
    # maximize total mass under one <= row: all columns, target 1
    space = toy_space(1)
    lp = LinearProgram(
        "toy", space, (Row("mass", "m", (), F(1), "le"),), col_cost=-1
    )
    sol = solve(lp)
    assert sol.status == "optimal"
    assert sol.value == -1


def test_infeasible_with_farkas_certificate():
    space = toy_space(1)
    lp = LinearProgram(
        "bad",
        space,
        (
            eq_row(space, [(0, 0)], F(3, 4)),
            eq_row(space, [(0, 0)], F(1, 4), label="duplicate-different"),
        ),
    )
    sol = solve(lp)
    assert sol.status == "infeasible"
    assert sol.certificate is not None
    assert verify_farkas(lp, sol.certificate)


def test_feasibility_of_a5_infeasible_with_certificate():
    prog = build_feasibility_program(catalog.named("A5"))
    sol = solve(prog)
    assert sol.status == "infeasible"
    assert verify_farkas(prog, sol.certificate)


def test_cnt3_optimum_value_and_support_mass():
    prog = build_cnt3_program(catalog.named("A1"))
    sol = solve(prog)
    assert sol.value == F(11, 10)
    assert sum(sol.support.values()) == 1
    assert sum(abs(v) for v in sol.support.values()) == F(11, 10)


def test_exact_solution_reproduces_row_targets():
    prog = build_feasibility_program(catalog.named("A0"))
    sol = solve(prog)
    assert sol.status == "optimal"
    for row in prog.rows:
        assert row_activity(prog, sol.support, row) == row.target


def test_cntf_solution_respects_le_rows():
    prog = build_cntf_program(catalog.named("A1"))
    sol = solve(prog)
    assert 1 + sol.value == F(1, 5)
    for row in prog.rows:
        assert row_activity(prog, sol.support, row) <= row.target


def test_exact_and_float_agree():
    for sid in ("A1", "A'3", "B1"):
        for builder, post in (
            (build_cnt3_program, lambda v: v - 1),
            (build_cntf_program, lambda v: 1 + v),
        ):
            prog = builder(catalog.named(sid))
            exact = post(solve(prog, "exact").value)
            approx = post(solve(prog, "float").value)
            assert abs(float(exact) - approx) <= 1e-6


def test_determinism_identical_pivot_sequences():
    prog = build_cnt3_program(catalog.named("A'1"))
    opts = SolveOptions(log=True)
    a = solve(prog, "exact", opts)
    b = solve(prog, "exact", opts)
    assert a.value == b.value
    assert a.stats["pivots"] == b.stats["pivots"]
    assert a.support == b.support


def test_bland_and_dantzig_reach_the_same_exact_value():
    prog = build_cnt3_program(catalog.named("B'2"))
    v1 = solve(prog, "exact", SolveOptions(pricing="bland")).value
    v2 = solve(prog, "exact", SolveOptions(pricing="dantzig")).value
    assert v1 == v2


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(0, 8), min_size=8, max_size=8),
    st.lists(st.integers(0, 8), min_size=8, max_size=8),
)
def test_random_couplings_against_scipy(w1, w2):
    """CNTF-style programs on random two-context systems vs scipy linprog."""
    scipy_opt = pytest.importorskip("scipy.optimize")
    from ctxprof import JointDistribution, System, build_cntf_program

    def dist(weights, qs):
        total = sum(weights) or 1
        atoms = {
            key: F(w, total)
            for key, w in zip(itertools.product("+-", repeat=3), weights)
            if w
        }
        if not atoms:
            atoms = {("+",) * 3: F(1)}
        return JointDistribution(qs, atoms)

    s = System({
        "1": dist(w1, ("a", "b", "c")),
        "2": dist(w2, ("b", "c", "d")),
    })
    prog = build_cntf_program(s)
    sol = solve(prog)
    # dense scipy reference
    n = prog.space.n_columns
    A = np.zeros((len(prog.rows), n))
    for r, row in enumerate(prog.rows):
        for j in range(n):
            if all(prog.space.value_index(j, p) == v for p, v in row.conds):
                A[r, j] = 1.0
    b = np.array([float(r.target) for r in prog.rows])
    ref = scipy_opt.linprog(-np.ones(n), A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    assert ref.status == 0
    assert abs(float(sol.value) - ref.fun) < 1e-8
