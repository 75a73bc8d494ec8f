from fractions import Fraction as F

import pytest

from ctxprof import (
    JointDistribution,
    as_fraction,
    catalog,
    connections_of,
    degree,
    relabel,
    system_from_parts,
    validate_system,
)


def anti():
    return {("+", "-"): F(1, 2), ("-", "+"): F(1, 2)}


def test_as_fraction_parses_decimals_exactly():
    assert as_fraction("0.4") == F(2, 5)
    assert as_fraction("2/5") == F(2, 5)
    assert as_fraction(1) == F(1)
    with pytest.raises(TypeError):
        as_fraction(0.4)


def test_validate_catalog_system_ok():
    report = validate_system(catalog.named("A0"))
    assert report.ok, report.violations


def test_validate_flags_bad_mass():
    s = system_from_parts([("1", ["1", "2"], {("+", "-"): F(9, 10)})])
    report = validate_system(s)
    assert not report.ok
    assert any("mass != 1" in v for v in report.violations)


def test_validate_flags_domain_mismatch():
    d1 = JointDistribution(("1",), {("a",): F(1)}, (("a", "b"),))
    d2 = JointDistribution(("1",), {("x",): F(1)}, (("x", "y"),))
    from ctxprof import System

    report = validate_system(System({"c1": d1, "c2": d2}))
    assert not report.ok
    assert any("domain" in v for v in report.violations)


def test_validate_flags_repeated_question():
    s = system_from_parts([("1", ["1", "1"], {("+", "+"): F(1)})])
    assert not validate_system(s).ok


def test_connections_partition_incidences():
    s = catalog.named("B1")
    conns = connections_of(s)
    incidences = [(q, c) for conn in conns for c in conn.members for q in [conn.question]]
    assert sorted(incidences) == sorted(s.incidences())
    members = {c.question: c.members for c in conns}
    assert members["3"] == ("1", "2", "3")


def test_connections_on_wide_example_layout():
    # the five-question layout whose second context holds four variables
    uniform2 = {("+", "+"): F(1, 4), ("+", "-"): F(1, 4), ("-", "+"): F(1, 4), ("-", "-"): F(1, 4)}
    uniform4 = {
        tuple(v): F(1, 16)
        for v in __import__("itertools").product("+-", repeat=4)
    }
    uniform3 = {
        tuple(v): F(1, 8) for v in __import__("itertools").product("+-", repeat=3)
    }
    s = system_from_parts(
        [
            ("1", ["2", "3"], uniform2),
            ("2", ["1", "2", "4", "5"], uniform4),
            ("3", ["1", "2", "3", "4"], uniform4),
            ("4", ["1", "2", "5"], uniform3),
        ]
    )
    members = {c.question: set(c.members) for c in connections_of(s)}
    assert members["2"] == {"1", "2", "3", "4"}


def test_single_context_connections_have_one_member():
    s = system_from_parts([("1", ["1", "2"], anti())])
    assert all(len(c.members) == 1 for c in connections_of(s))


def test_relabel_identity():
    s = catalog.named("A1")
    assert relabel(s) == s


def test_relabel_requires_injective_maps():
    s = catalog.named("A1")
    with pytest.raises(ValueError):
        relabel(s, {"1": "2"})


def test_relabel_prime_scheme():
    s = catalog.named("B1")
    out = relabel(s, {q: q + "'" for q in s.questions()}, {c: c + "'" for c in s.context_ids()})
    assert out.questions() == ["1'", "2'", "3'", "4'"]
    assert out.context_ids() == ["1'", "2'", "3'"]


def test_relabel_invariance_of_degree():
    # swapping two question labels must not change any degree
    s = catalog.named("A1")
    swapped = relabel(s, {"1": "2", "2": "1"})
    for measure in ("cnt2", "cnt3", "cntf"):
        assert degree(swapped, measure).value == degree(s, measure).value
    assert degree(swapped, "cnt2").value == F(1, 10)
