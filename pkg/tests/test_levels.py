import itertools
from fractions import Fraction as F

import pytest

from ctxprof import (
    catalog,
    degree,
    is_noncontextual,
    level_representation,
    marginalize,
    max_coupling_target,
    max_level,
    system_from_parts,
)
from ctxprof.moments import single_marginal


def uniform(*qs):
    n = len(qs)
    return {k: F(1, 2**n) for k in itertools.product("+-", repeat=n)}


@pytest.fixture()
def wide_system():
    # contexts of sizes 2, 4, 4, 3 over five questions
    return system_from_parts(
        [
            ("1", ["2", "3"], uniform("2", "3")),
            ("2", ["1", "2", "4", "5"], uniform("1", "2", "4", "5")),
            ("3", ["1", "2", "3", "4"], uniform("1", "2", "3", "4")),
            ("4", ["1", "2", "5"], uniform("1", "2", "5")),
        ]
    )


def test_max_level(wide_system):
    assert max_level(wide_system) == 4
    assert max_level(catalog.named("A1")) == 2
    assert max_level(catalog.named("H0")) == 3


def test_four_variable_context_splits_into_six_pairs(wide_system):
    rep = level_representation(wide_system, 2)
    sub_ids = [cid for cid in rep.system.context_ids() if cid.startswith("2.")]
    assert sub_ids == [f"2.{i}" for i in range(1, 7)]
    # lexicographic subset order of the sorted question ids
    assert [rep.provenance[cid][1] for cid in sub_ids] == [
        ("1", "2"), ("1", "4"), ("1", "5"), ("2", "4"), ("2", "5"), ("4", "5"),
    ]


def test_small_contexts_kept_unchanged(wide_system):
    rep = level_representation(wide_system, 3)
    assert "1" in rep.system.contexts          # the two-variable context
    assert rep.system.context("1") == wide_system.context("1")
    assert "4" in rep.system.contexts          # the three-variable context
    # four-variable contexts split into the four triples
    assert [c for c in rep.system.context_ids() if c.startswith("3.")] == [
        "3.1", "3.2", "3.3", "3.4",
    ]


def test_level_at_or_above_max_is_identity(wide_system):
    for n in (4, 5, 7):
        rep = level_representation(wide_system, n)
        assert rep.system == wide_system


def test_level_one_splits_into_singletons(wide_system):
    rep = level_representation(wide_system, 1)
    assert len(rep.system.contexts) == len(wide_system.incidences())
    assert all(len(d.variables) == 1 for d in rep.system.contexts.values())


def test_level_rejects_nonpositive():
    with pytest.raises(ValueError):
        level_representation(catalog.named("A0"), 0)


def test_subcontext_distributions_are_exact_marginals():
    s = catalog.named("B1")
    rep = level_representation(s, 2)
    for cid, (orig, subset) in rep.provenance.items():
        expected = marginalize(s.context(orig), subset)
        assert rep.system.context(cid).atoms == expected.atoms


def test_same_original_subcontexts_consistently_connected():
    s = catalog.named("H'3")   # disturbed, so only within-original copies agree
    rep = level_representation(s, 2)
    by_orig_question = {}
    for cid, (orig, subset) in rep.provenance.items():
        for q in subset:
            by_orig_question.setdefault((orig, q), []).append(cid)
    for (orig, q), cids in by_orig_question.items():
        for c1, c2 in itertools.combinations(cids, 2):
            p1 = single_marginal(rep.system.context(c1), q)
            p2 = single_marginal(rep.system.context(c2), q)
            total = sum(max_coupling_target(p1, p2, v) for v in p1.domains[0])
            assert total == 1


def test_level_one_degree_is_zero():
    rep = level_representation(catalog.named("A5"), 1).system
    for measure in ("cnt2", "cnt3", "cntf"):
        assert degree(rep, measure).value == 0
    assert is_noncontextual(rep)


@pytest.mark.slow
def test_appending_lower_order_subcontexts_never_changes_degrees():
    """Appending redundant lower-order marginal contexts to a representation
    leaves all degrees unchanged; checked on undisturbed and disturbed
    catalog systems alike (the disturbed outcome is reported, not assumed)."""
    from ctxprof import JointDistribution, System

    for sid in ("A1", "A'1", "B1", "B'3"):
        s = catalog.named(sid)
        n = max_level(s)
        rep = level_representation(s, n).system
        first_cid = s.context_ids()[0]
        first = s.context(first_cid)
        pair = tuple(first.variables[:2])
        extra = marginalize(first, pair)
        augmented = System({**rep.contexts, f"{first_cid}+pair": extra})
        for measure in ("cnt2", "cnt3", "cntf"):
            assert (
                degree(augmented, measure).value == degree(rep, measure).value
            ), (sid, measure)
