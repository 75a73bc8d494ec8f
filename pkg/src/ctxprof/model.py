"""Systems of random variables: questions, contexts, joint distributions.

A system is a collection of contexts; each context holds the joint
distribution of the variables answering its questions.  Variables in
different contexts are distinct random variables even when they answer the
same question.  All probabilities are exact `fractions.Fraction` values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

DEFAULT_DOMAIN = ("+", "-")


def as_fraction(x) -> Fraction:
    """Parse a probability given as Fraction, int, or string ("2/5", "0.4")."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError(
            f"refusing float {x!r}: pass a string or Fraction so the value is exact"
        )
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class JointDistribution:
    """Joint distribution of one context's variables.

    atoms maps value-label tuples to probabilities; zero atoms may be
    omitted.  domains gives the ordered value labels of each variable
    (first label is the designated "one" value used by moment encodings).
    """

    variables: tuple[str, ...]
    atoms: Mapping[tuple[str, ...], Fraction]
    domains: tuple[tuple[str, ...], ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.domains is None:
            object.__setattr__(
                self, "domains", tuple(DEFAULT_DOMAIN for _ in self.variables)
            )
        else:
            object.__setattr__(self, "domains", tuple(tuple(d) for d in self.domains))
        atoms = {
            tuple(k): as_fraction(v) for k, v in dict(self.atoms).items() if v != 0
        }
        object.__setattr__(self, "atoms", atoms)

    def domain(self, q: str) -> tuple[str, ...]:
        return self.domains[self.variables.index(q)]

    def prob(self, values: Sequence[str]) -> Fraction:
        return self.atoms.get(tuple(values), Fraction(0))

    def total_mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def support(self):
        return sorted(self.atoms)

    def all_value_tuples(self):
        return itertools.product(*self.domains)

    def violations(self) -> list[str]:
        out = []
        if not self.variables:
            out.append("context has no variables")
        if len(set(self.variables)) != len(self.variables):
            out.append(f"question repeated within a context: {self.variables}")
        for d in self.domains:
            if len(d) < 2:
                out.append(f"value domain {d} has fewer than 2 values")
            if len(set(d)) != len(d):
                out.append(f"value domain {d} has duplicate labels")
        for key, p in self.atoms.items():
            if len(key) != len(self.variables):
                out.append(f"atom {key} has wrong arity for {self.variables}")
                continue
            if any(v not in dom for v, dom in zip(key, self.domains)):
                out.append(f"atom {key} uses labels outside the value domains")
            if p < 0:
                out.append(f"atom {key} has negative probability {p}")
        if not out and self.total_mass() != 1:
            out.append(f"atom probabilities sum to {self.total_mass()}, not 1 (mass != 1)")
        return out


@dataclass(frozen=True)
class System:
    """Ordered map of context id -> JointDistribution."""

    contexts: Mapping[str, JointDistribution]

    def __post_init__(self):
        object.__setattr__(self, "contexts", dict(self.contexts))

    def context_ids(self) -> list[str]:
        return list(self.contexts)

    def questions(self) -> list[str]:
        seen: dict[str, None] = {}
        for dist in self.contexts.values():
            for q in dist.variables:
                seen.setdefault(q)
        return sorted(seen)

    def incidences(self) -> list[tuple[str, str]]:
        """(question, context) pairs, in context order then position order."""
        return [
            (q, cid) for cid, dist in self.contexts.items() for q in dist.variables
        ]

    def domain(self, q: str) -> tuple[str, ...]:
        for dist in self.contexts.values():
            if q in dist.variables:
                return dist.domain(q)
        raise KeyError(q)

    def context(self, cid: str) -> JointDistribution:
        return self.contexts[cid]


@dataclass(frozen=True)
class Connection:
    """All contexts in which one question is answered."""

    question: str
    members: tuple[str, ...]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_system(s: System) -> ValidationReport:
    """Check every invariant; violations are the payload, nothing raises."""
    report = ValidationReport()
    if not s.contexts:
        report.violations.append("system has no contexts")
    for cid, dist in s.contexts.items():
        for v in dist.violations():
            report.violations.append(f"context {cid}: {v}")
    # one domain per question across all contexts
    domains: dict[str, tuple[str, ...]] = {}
    for cid, dist in s.contexts.items():
        for q in dist.variables:
            d = dist.domain(q)
            if q in domains and domains[q] != d:
                report.violations.append(
                    f"question {q} has domain {d} in context {cid} "
                    f"but {domains[q]} elsewhere"
                )
            domains.setdefault(q, d)
    return report


def connections_of(s: System) -> list[Connection]:
    """One Connection per question; members in system context order."""
    members: dict[str, list[str]] = {}
    for cid, dist in s.contexts.items():
        for q in dist.variables:
            members.setdefault(q, []).append(cid)
    return [Connection(q, tuple(members[q])) for q in sorted(members)]


def relabel(
    s: System,
    question_map: Mapping[str, str] | None = None,
    context_map: Mapping[str, str] | None = None,
) -> System:
    """Rename questions and/or contexts; maps must be injective."""
    qmap = dict(question_map or {})
    cmap = dict(context_map or {})
    for name, m, keys in (
        ("question", qmap, s.questions()),
        ("context", cmap, s.context_ids()),
    ):
        image = [m.get(k, k) for k in keys]
        if len(set(image)) != len(image):
            raise ValueError(f"{name} map is not injective on {keys}")
    contexts = {}
    for cid, dist in s.contexts.items():
        contexts[cmap.get(cid, cid)] = JointDistribution(
            tuple(qmap.get(q, q) for q in dist.variables), dist.atoms, dist.domains
        )
    return System(contexts)


def system_from_parts(
    parts: Iterable[tuple[str, Sequence[str], Mapping[tuple[str, ...], Fraction]]],
    domains: Mapping[str, Sequence[str]] | None = None,
) -> System:
    """Convenience constructor from (context_id, questions, atoms) triples."""
    domains = dict(domains or {})
    contexts = {}
    for cid, qs, atoms in parts:
        doms = tuple(tuple(domains.get(q, DEFAULT_DOMAIN)) for q in qs)
        contexts[cid] = JointDistribution(tuple(qs), atoms, doms)
    return System(contexts)
