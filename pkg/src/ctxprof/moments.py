"""Conversions between atom probabilities and all-ones subset moments.

A MomentSpec describes a dichotomous context by the probabilities that every
nonempty subset of its variables jointly takes the designated "one" value
(the first label of each domain).  Moebius inversion recovers the atoms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .model import DEFAULT_DOMAIN, JointDistribution, as_fraction


class NotADistribution(ValueError):
    """The given moments induce a negative atom probability."""


@dataclass(frozen=True)
class MomentSpec:
    variables: tuple[str, ...]
    values: Mapping[frozenset, Fraction]
    domains: tuple[tuple[str, ...], ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.domains is None:
            object.__setattr__(
                self, "domains", tuple(DEFAULT_DOMAIN for _ in self.variables)
            )
        else:
            object.__setattr__(self, "domains", tuple(tuple(d) for d in self.domains))
        vals = {frozenset(k): as_fraction(v) for k, v in dict(self.values).items()}
        for key in vals:
            if not key or not key <= set(self.variables):
                raise ValueError(f"moment subset {set(key)} not within {self.variables}")
        missing = [
            T
            for r in range(1, len(self.variables) + 1)
            for T in map(frozenset, itertools.combinations(self.variables, r))
            if T not in vals
        ]
        if missing:
            raise ValueError(f"missing moments for subsets {sorted(map(sorted, missing))}")
        object.__setattr__(self, "values", vals)

    def moment(self, subset) -> Fraction:
        subset = frozenset(subset)
        return Fraction(1) if not subset else self.values[subset]


def _require_dichotomous(domains):
    for d in domains:
        if len(d) != 2:
            raise ValueError(f"moment encoding requires dichotomous variables, got domain {d}")


def moments_to_atoms(spec: MomentSpec) -> JointDistribution:
    """Invert all-ones moments into the unique atom distribution.

    P(exactly the set S takes "one") = sum over T >= S of (-1)^{|T|-|S|} m(T).
    Raises NotADistribution if any induced atom is negative (no clipping).
    """
    _require_dichotomous(spec.domains)
    vars_ = spec.variables
    atoms: dict[tuple[str, ...], Fraction] = {}
    for bits in itertools.product((0, 1), repeat=len(vars_)):
        ones = frozenset(v for v, b in zip(vars_, bits) if b == 0)  # bit 0 = "one" label
        rest = [v for v in vars_ if v not in ones]
        p = Fraction(0)
        for r in range(len(rest) + 1):
            for extra in itertools.combinations(rest, r):
                p += (-1) ** r * spec.moment(ones | frozenset(extra))
        if p < 0:
            raise NotADistribution(
                f"not a distribution: induced atom for ones={sorted(ones)} is {p}"
            )
        if p:
            label = tuple(dom[b] for dom, b in zip(spec.domains, bits))
            atoms[label] = p
    return JointDistribution(vars_, atoms, spec.domains)


def atoms_to_moments(d: JointDistribution) -> MomentSpec:
    """All-ones subset probabilities of a dichotomous distribution."""
    _require_dichotomous(d.domains)
    ones = {q: dom[0] for q, dom in zip(d.variables, d.domains)}
    values = {}
    for r in range(1, len(d.variables) + 1):
        for subset in itertools.combinations(d.variables, r):
            idx = [d.variables.index(q) for q in subset]
            values[frozenset(subset)] = sum(
                (p for key, p in d.atoms.items() if all(key[i] == ones[q] for i, q in zip(idx, subset))),
                Fraction(0),
            )
    return MomentSpec(d.variables, values, d.domains)


def marginalize(d: JointDistribution, subset: Sequence[str]) -> JointDistribution:
    """Marginal of d on `subset`, in the order given."""
    subset = tuple(subset)
    if not subset:
        raise ValueError("cannot marginalize to the empty set")
    if not set(subset) <= set(d.variables):
        raise ValueError(f"{subset} is not contained in {d.variables}")
    idx = [d.variables.index(q) for q in subset]
    atoms: dict[tuple[str, ...], Fraction] = {}
    for key, p in d.atoms.items():
        sub = tuple(key[i] for i in idx)
        atoms[sub] = atoms.get(sub, Fraction(0)) + p
    domains = tuple(d.domains[i] for i in idx)
    return JointDistribution(subset, atoms, domains)


def single_marginal(d: JointDistribution, q: str) -> JointDistribution:
    return marginalize(d, (q,))


def max_coupling_target(p: JointDistribution, p2: JointDistribution, value: str) -> Fraction:
    """Forced per-value mass of a coincidence-maximizing coupling: min(p(a), p'(a))."""
    if len(p.variables) != 1 or len(p2.variables) != 1:
        raise ValueError("max_coupling_target takes one-variable distributions")
    if p.domains[0] != p2.domains[0]:
        raise ValueError(f"domain mismatch: {p.domains[0]} vs {p2.domains[0]}")
    if value not in p.domains[0]:
        raise ValueError(f"value {value!r} not in domain {p.domains[0]}")
    return min(p.prob((value,)), p2.prob((value,)))


def max_coupling_joint(
    p: JointDistribution, p2: JointDistribution
) -> dict[tuple[str, str], Fraction]:
    """Joint distribution of the (unique, for dichotomous) maximal coupling.

    Diagonal entries are min(p(a), p'(a)); off-diagonal mass is forced by the
    marginals.
    """
    if len(p.variables) != 1 or len(p2.variables) != 1:
        raise ValueError("max_coupling_joint takes one-variable distributions")
    dom = p.domains[0]
    if dom != p2.domains[0]:
        raise ValueError(f"domain mismatch: {dom} vs {p2.domains[0]}")
    if len(dom) != 2:
        raise ValueError("max_coupling_joint is defined here for dichotomous variables")
    a, b = dom
    mins = {v: min(p.prob((v,)), p2.prob((v,))) for v in dom}
    return {
        (a, a): mins[a],
        (b, b): mins[b],
        (a, b): p.prob((a,)) - mins[a],
        (b, a): p2.prob((a,)) - mins[a],
    }
