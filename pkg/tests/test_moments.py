import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxprof import (
    JointDistribution,
    MomentSpec,
    NotADistribution,
    atoms_to_moments,
    catalog,
    marginalize,
    max_coupling_joint,
    max_coupling_target,
    moments_to_atoms,
)
from ctxprof.moments import single_marginal


def brute_force_all_ones(atoms_dist: JointDistribution, subset):
    """Independent oracle: sum atom probabilities where every subset member
    takes the first value of its domain."""
    idx = [atoms_dist.variables.index(q) for q in subset]
    ones = [atoms_dist.domains[i][0] for i in idx]
    return sum(
        (p for key, p in atoms_dist.atoms.items()
         if all(key[i] == o for i, o in zip(idx, ones))),
        F(0),
    )


def spec2(s1, s2, pair, names=("q1", "q2")):
    return MomentSpec(
        names,
        {
            frozenset({names[0]}): F(s1),
            frozenset({names[1]}): F(s2),
            frozenset(names): F(pair),
        },
    )


def test_independent_fair_pair():
    d = moments_to_atoms(spec2(F(1, 2), F(1, 2), F(1, 4)))
    assert all(d.prob(k) == F(1, 4) for k in itertools.product("+-", repeat=2))


def test_perfect_anticorrelation():
    d = moments_to_atoms(spec2(F(1, 2), F(1, 2), F(0)))
    assert d.prob(("+", "+")) == 0
    assert d.prob(("+", "-")) == F(1, 2)
    assert d.prob(("-", "+")) == F(1, 2)
    assert d.prob(("-", "-")) == 0


def test_third_context_atoms_match_inclusion_exclusion_oracle():
    # singles 1/2, pair 2/5: frozen from the subset-sum oracle below
    d = moments_to_atoms(spec2(F(1, 2), F(1, 2), F(2, 5)))
    assert d.prob(("+", "+")) == F(2, 5)
    assert d.prob(("+", "-")) == F(1, 10)
    assert d.prob(("-", "+")) == F(1, 10)
    assert d.prob(("-", "-")) == F(2, 5)
    # and the oracle agrees on every subset
    for subset in (("q1",), ("q2",), ("q1", "q2")):
        spec = atoms_to_moments(d)
        assert spec.moment(subset) == brute_force_all_ones(d, subset)


def test_negative_atom_rejected_not_clipped():
    with pytest.raises(NotADistribution):
        moments_to_atoms(spec2(F(1, 2), F(1, 2), F(1, 2) + F(1, 100)))


def test_round_trip_on_all_catalog_contexts():
    for sid in catalog.all_ids():
        for cid, dist in catalog.named(sid).contexts.items():
            spec = atoms_to_moments(dist)
            again = moments_to_atoms(spec)
            assert again.atoms == dist.atoms, (sid, cid)


def test_uniform_three_variable_moments():
    atoms = {k: F(1, 8) for k in itertools.product("+-", repeat=3)}
    d = JointDistribution(("a", "b", "c"), atoms)
    spec = atoms_to_moments(d)
    assert spec.moment(("a",)) == F(1, 2)
    assert spec.moment(("a", "b")) == F(1, 4)
    assert spec.moment(("a", "b", "c")) == F(1, 8)


def test_deterministic_all_ones():
    d = JointDistribution(("a", "b"), {("+", "+"): F(1)})
    spec = atoms_to_moments(d)
    assert all(v == 1 for v in spec.values.values())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 24), min_size=8, max_size=8).filter(lambda w: sum(w) > 0))
def test_round_trip_random_three_variable_distributions(weights):
    total = sum(weights)
    atoms = {
        key: F(w, total)
        for key, w in zip(itertools.product("+-", repeat=3), weights)
        if w
    }
    d = JointDistribution(("x", "y", "z"), atoms)
    assert moments_to_atoms(atoms_to_moments(d)).atoms == d.atoms


def test_marginalize_consistency_oracle():
    # pair and single marginals agree with direct moment sums
    d = catalog.named("B1").context("1")
    for r in (1, 2):
        for subset in itertools.combinations(d.variables, r):
            marg = marginalize(d, subset)
            spec = atoms_to_moments(marg)
            assert spec.moment(subset) == brute_force_all_ones(d, subset)


def test_marginalize_full_set_is_identity():
    d = catalog.named("B1").context("2")
    assert marginalize(d, d.variables).atoms == d.atoms


def test_marginalize_commutes():
    d = catalog.named("H0").context("1")
    via_pair = marginalize(marginalize(d, ("1", "2")), ("2",))
    direct = marginalize(d, ("2",))
    assert via_pair.atoms == direct.atoms


def test_marginalize_rejects_foreign_subset():
    d = catalog.named("A0").context("1")
    with pytest.raises(ValueError):
        marginalize(d, ("nope",))


def test_b1_first_context_pair_marginal_is_independent_fair():
    d = catalog.named("B1").context("1")
    marg = marginalize(d, ("1", "2"))
    assert all(marg.prob(k) == F(1, 4) for k in itertools.product("+-", repeat=2))


def test_max_coupling_identical_marginals():
    d = moments_to_atoms(spec2(F(1, 2), F(1, 2), F(1, 4)))
    p = single_marginal(d, "q1")
    assert max_coupling_target(p, p, "+") == F(1, 2)
    assert max_coupling_target(p, p, "+") + max_coupling_target(p, p, "-") == 1


def test_max_coupling_on_disturbed_marginals():
    bp1 = catalog.named("B'1")
    p_c1 = single_marginal(bp1.context("1"), "1")   # 13/25
    p_c3 = single_marginal(bp1.context("3"), "1")   # 12/25
    assert p_c1.prob(("+",)) == F(13, 25)
    assert p_c3.prob(("+",)) == F(12, 25)
    assert max_coupling_target(p_c1, p_c3, "+") == F(12, 25)
    joint = max_coupling_joint(p_c1, p_c3)
    assert joint[("+", "+")] == F(12, 25)
    assert joint[("+", "-")] == F(1, 25)
    assert joint[("-", "+")] == F(0)
    assert sum(joint.values()) == 1


def test_max_coupling_total_at_most_one():
    for sid in ("A'1", "B'2", "H'3"):
        s = catalog.named(sid)
        for q in s.questions():
            members = [c for c in s.context_ids() if q in s.context(c).variables]
            for c1, c2 in itertools.combinations(members, 2):
                p1 = single_marginal(s.context(c1), q)
                p2 = single_marginal(s.context(c2), q)
                total = sum(
                    max_coupling_target(p1, p2, v) for v in p1.domains[0]
                )
                assert total <= 1
                identical = all(
                    p1.prob((v,)) == p2.prob((v,)) for v in p1.domains[0]
                )
                assert (total == 1) == identical


def test_domain_mismatch_rejected():
    p1 = JointDistribution(("q",), {("a",): F(1)}, (("a", "b"),))
    p2 = JointDistribution(("q",), {("x",): F(1)}, (("x", "y"),))
    with pytest.raises(ValueError):
        max_coupling_target(p1, p2, "a")
