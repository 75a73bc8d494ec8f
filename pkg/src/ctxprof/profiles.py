"""Contextuality profiles, concatenation, and increment classification."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .levels import level_representation, max_level
from .measures import DegreeResult, Options, canonical_measure, degree, is_noncontextual
from .model import JointDistribution, System, relabel


class IncrementPurityError(ValueError):
    """The B-part is contextual below its final level."""


@dataclass(frozen=True)
class Profile:
    measure: str
    entries: tuple[tuple[int, Fraction | float], ...]   # (level, degree), level 1..N

    @property
    def final(self):
        return self.entries[-1][1]

    def value_at(self, level: int):
        for n, v in self.entries:
            if n == level:
                return v
        raise KeyError(level)

    def first_contextual_level(self) -> int | None:
        for n, v in self.entries:
            if v > 0:
                return n
        return None


@dataclass(frozen=True)
class IncrementClass:
    kind: str          # "superadditive" | "additive" | "subadditive"
    plateau: bool

    def __str__(self):
        return f"{self.kind}+plateau" if self.plateau else self.kind


@dataclass(frozen=True)
class ConcatReport:
    measure: str
    n: int                       # final level of the A-part
    d_n: Fraction | float
    delta_next: Fraction | float
    d_next: Fraction | float
    classification: IncrementClass


def profile(s: System, measure: str, options: Options | None = None) -> Profile:
    """Degrees of the level-1..N representations; level 1 is 0 by construction."""
    measure = canonical_measure(measure)
    options = options or Options()
    zero = Fraction(0) if options.mode == "exact" else 0.0
    entries: list[tuple[int, Fraction | float]] = [(1, zero)]
    for n in range(2, max_level(s) + 1):
        rep = level_representation(s, n)
        entries.append((n, degree(rep.system, measure, options).value))
    return Profile(measure, tuple(entries))


def _prime(name: str) -> str:
    return name + "'"


def concatenate(a: System, b: System) -> System:
    """Disjoint union; b's questions and contexts get a prime suffix until
    disjoint from a's."""
    b_renamed = b
    while True:
        q_clash = set(a.questions()) & set(b_renamed.questions())
        c_clash = set(a.context_ids()) & set(b_renamed.context_ids())
        if not q_clash and not c_clash:
            break
        b_renamed = relabel(
            b_renamed,
            {q: _prime(q) for q in b_renamed.questions()},
            {c: _prime(c) for c in b_renamed.context_ids()},
        )
    contexts: dict[str, JointDistribution] = dict(a.contexts)
    contexts.update(b_renamed.contexts)
    return System(contexts)


def concatenate_many(systems) -> System:
    systems = list(systems)
    if not systems:
        raise ValueError("concatenate_many needs at least one system")
    out = systems[0]
    for s in systems[1:]:
        out = concatenate(out, s)
    return out


def classify_increment(d_n, delta_next, d_next) -> IncrementClass:
    """Compare d_n + delta against d_{n+1} (paper cases 1-4; plateau is a flag)."""
    if d_n < 0 or delta_next < 0 or d_next < d_n:
        raise ValueError(
            "increments of a well-constructed measure satisfy "
            f"0 <= d_n <= d_next and delta >= 0; got {d_n}, {delta_next}, {d_next}"
        )
    total = d_n + delta_next
    if total < d_next:
        kind = "superadditive"
    elif total == d_next:
        kind = "additive"
    else:
        kind = "subadditive"
    return IncrementClass(kind, plateau=(d_n == d_next))


def concat_analysis(
    a: System, b: System, measure: str, options: Options | None = None
) -> ConcatReport:
    """d_n, the increment of b, and the joint degree at level n+1."""
    measure = canonical_measure(measure)
    options = options or Options()
    n = max_level(a)
    if max_level(b) != n + 1:
        raise ValueError(
            f"the B-part must have contexts one variable wider than the A-part "
            f"(levels {max_level(b)} vs {n})"
        )
    for k in range(2, n + 1):
        rep = level_representation(b, k)
        if not is_noncontextual(rep.system, options):
            raise IncrementPurityError(
                f"B-part not increment-pure: contextual at level {k}"
            )
    d_n = degree(level_representation(a, n).system, measure, options).value
    delta = degree(level_representation(b, n + 1).system, measure, options).value
    joint = concatenate(a, b)
    d_next = degree(level_representation(joint, n + 1).system, measure, options).value
    return ConcatReport(
        measure, n, d_n, delta, d_next, classify_increment(d_n, delta, d_next)
    )
