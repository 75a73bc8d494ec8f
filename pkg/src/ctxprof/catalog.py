"""Named benchmark systems and the cyclic/hypercyclic generators.

Hypercyclic layout of order h and rank r: context i (1-based) holds questions
i, i+1, ..., i+h-1 mod r, each row cyclically shifted by one against the
previous.  Cyclic systems are the h = 2 special case.

The named selections:

* A0-A5 -- undisturbed rank-3 cyclic; uniform singles, contexts (1,2) and
  (2,3) perfectly anticorrelated, context (3,1) pair moment 1/2 down to 0.
* A'0-A'6 -- disturbed rank-3 cyclic with singles (4/9, 5/9) in every context.
* B1, B2 -- undisturbed rank-4 order-3 hypercyclic abridged to its first
  three contexts; uniform singles and pairs, triple moments varying.
* B'1-B'3 -- the disturbed abridged counterparts.
* H0-H3 -- undisturbed full rank-4 order-3 hypercyclic selection.
* H'0-H'4 -- disturbed counterparts.

All moments are "all-ones" subset probabilities: the probability that every
variable in the subset takes the first value of its domain.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Mapping, Sequence

from .model import System
from .moments import MomentSpec, moments_to_atoms

__all__ = [
    "HypercyclicSpec",
    "hypercyclic",
    "cyclic",
    "b_system",
    "named",
    "all_ids",
    "undisturbed_ids",
    "disturbed_ids",
    "hypercyclic_ids",
]


@dataclass(frozen=True)
class HypercyclicSpec:
    order: int
    rank: int
    context_moments: tuple[Mapping, ...]   # one mapping {frozenset(local idx): p} per context

    def __post_init__(self):
        if not 2 <= self.order <= self.rank:
            raise ValueError(f"need 2 <= order <= rank, got {self.order}, {self.rank}")
        if len(self.context_moments) != self.rank:
            raise ValueError(
                f"need {self.rank} context moment sets, got {len(self.context_moments)}"
            )
        for i, moments in enumerate(self.context_moments):
            need = {
                frozenset(c)
                for r in range(1, self.order + 1)
                for c in itertools.combinations(range(self.order), r)
            }
            have = {frozenset(k) for k in moments}
            if have != need:
                raise ValueError(f"context {i + 1}: moment subsets {have} != {need}")


def _context_questions(spec: HypercyclicSpec, i: int) -> tuple[str, ...]:
    return tuple(str((i + k) % spec.rank + 1) for k in range(spec.order))


def hypercyclic(spec: HypercyclicSpec) -> System:
    contexts = {}
    for i, moments in enumerate(spec.context_moments):
        qs = _context_questions(spec, i)
        values = {
            frozenset(qs[j] for j in key): F(p) for key, p in moments.items()
        }
        contexts[str(i + 1)] = moments_to_atoms(MomentSpec(qs, values))
    return System(contexts)


def cyclic(rank: int, context_moments: Sequence[Mapping]) -> System:
    """Rank-r cyclic system: contexts (1,2), (2,3), ..., (r,1)."""
    return hypercyclic(HypercyclicSpec(2, rank, tuple(context_moments)))


def _ctx2(s1, s2, pair) -> dict:
    return {
        frozenset({0}): F(s1),
        frozenset({1}): F(s2),
        frozenset({0, 1}): F(pair),
    }


def _ctx3(singles, pairs, triple) -> dict:
    """singles (s1,s2,s3); pairs in table order ((1,2), (2,3), (1,3)); triple."""
    s1, s2, s3 = singles
    p12, p23, p13 = pairs
    return {
        frozenset({0}): F(s1),
        frozenset({1}): F(s2),
        frozenset({2}): F(s3),
        frozenset({0, 1}): F(p12),
        frozenset({1, 2}): F(p23),
        frozenset({0, 2}): F(p13),
        frozenset({0, 1, 2}): F(triple),
    }


def b_system(context_moments: Sequence[Mapping], full: bool = False) -> System:
    """Rank-4 order-3 hypercyclic layout, abridged to 3 contexts by default.

    The abridged format drops the fourth context (questions 4,1,2); pass four
    moment sets and full=True to build the complete cycle.
    """
    n = 4 if full else 3
    if len(context_moments) != n:
        raise ValueError(f"need {n} context moment sets, got {len(context_moments)}")
    spec_rows = list(context_moments)
    if not full:
        # build via the full layout, then drop the absent last context
        filler = _ctx3((F(1, 2),) * 3, (F(1, 4),) * 3, F(1, 8))
        spec_rows = spec_rows + [filler]
    sys_full = hypercyclic(HypercyclicSpec(3, 4, tuple(spec_rows)))
    if full:
        return sys_full
    contexts = {cid: sys_full.contexts[cid] for cid in ("1", "2", "3")}
    return System(contexts)


_HALF = F(1, 2)
_UNIFORM3 = ((_HALF,) * 3, (F(1, 4),) * 3)

_A_THIRD_PAIR = [F(1, 2), F(2, 5), F(3, 10), F(1, 5), F(1, 10), F(0)]

_AP_SINGLES = (F(4, 9), F(5, 9))
_AP_SECOND_PAIR = [F(1, 9), F(1, 18), F(0), F(0), F(0), F(0), F(0)]
_AP_THIRD_PAIR = [F(2, 9), F(2, 9), F(2, 9), F(1, 6), F(1, 9), F(1, 18), F(0)]

# Table-1 row assignment (the appendix prints these two columns swapped):
# B1 is the system whose degrees are (1/24, 1/18, 1/6), B2 gives (1/8, 1/6, 1/2).
_B_TRIPLES = {"B1": (F(1, 8), F(1, 6), F(0)), "B2": (F(1, 8), F(0), F(1, 4))}

_BP_SINGLES = (F(13, 25), _HALF, F(12, 25))
_BP_PAIRS = (F(13, 50), F(6, 25), F(6, 25))
_BP_TRIPLES = {
    "B'1": (F(3, 25), F(0), F(2, 25)),
    "B'2": (F(3, 25), F(0), F(1, 25)),
    "B'3": (F(3, 25), F(0), F(0)),
}

_H_TRIPLES = {
    "H0": (F(1, 5), F(3, 20), F(3, 20), F(3, 20)),
    "H1": (F(1, 5), F(1, 5), F(1, 5), F(3, 20)),
    "H2": (F(1, 4), F(1, 5), F(3, 20), F(3, 20)),
    "H3": (F(1, 5), F(1, 5), F(1, 5), F(1, 5)),
}

_THIRD = F(1, 3)
_HP_ROWS = {
    # (singles, pairs, triple) per context, contexts 1..4.
    # H'0 contexts 2-4: third single 2/3; the printed 1/3 admits no joint
    # distribution (two pair moments tight at 1/3 would force the triple
    # moment to 1/3, not the printed 1/6).
    "H'0": (
        ((F(2, 3), F(2, 3), _HALF), (_THIRD,) * 3, F(1, 6)),
        ((_HALF, _HALF, F(2, 3)), (F(1, 6), _THIRD, _THIRD), F(1, 6)),
        ((_HALF, _HALF, F(2, 3)), (_THIRD,) * 3, F(1, 6)),
        ((_HALF, _HALF, F(2, 3)), (_THIRD,) * 3, F(1, 6)),
    ),
    "H'1": (
        ((_THIRD, _HALF, F(2, 3)), (F(1, 6), _THIRD, _THIRD), F(1, 6)),
        ((F(2, 3), F(2, 3), _HALF), (_THIRD,) * 3, F(1, 6)),
        ((F(2, 3), _HALF, F(2, 3)), (_THIRD,) * 3, F(1, 6)),
        ((_HALF, F(2, 3), F(2, 3)), (_THIRD,) * 3, F(1, 6)),
    ),
    "H'2": (
        ((F(1, 4), F(1, 4), F(1, 4)), (F(0), F(0), F(0)), F(0)),
        ((_HALF, F(1, 4), F(1, 4)), (F(1, 4), F(0), F(0)), F(0)),
        ((_HALF, F(1, 4), _HALF), (F(0), F(1, 4), F(1, 4)), F(0)),
        ((F(3, 4), F(1, 4), _HALF), (F(1, 4), F(1, 4), _HALF), F(1, 4)),
    ),
    "H'3": (
        ((F(3, 5), F(3, 5), F(1, 5)), (F(2, 5), F(1, 5), F(1, 5)), F(1, 5)),
        ((F(3, 5), F(2, 5), F(2, 5)), (F(1, 5), F(1, 5), F(2, 5)), F(1, 5)),
        ((F(2, 5), F(2, 5), F(3, 5)), (F(0), F(1, 5), F(1, 5)), F(0)),
        ((F(3, 5), F(2, 5), F(3, 5)), (F(1, 5), F(1, 5), F(2, 5)), F(1, 5)),
    ),
    "H'4": (
        ((F(3, 5), F(3, 5), F(1, 5)), (F(2, 5), F(1, 5), F(1, 5)), F(1, 5)),
        ((F(3, 5), F(2, 5), F(3, 5)), (F(1, 5), F(1, 5), F(2, 5)), F(1, 5)),
        ((F(2, 5), F(3, 5), F(3, 5)), (F(1, 5), F(1, 5), F(1, 5)), F(0)),
        ((F(3, 5), F(3, 5), F(3, 5)), (F(2, 5), F(1, 5), F(2, 5)), F(1, 5)),
    ),
}


def _a_system(i: int) -> System:
    return cyclic(
        3,
        (
            _ctx2(_HALF, _HALF, F(0)),
            _ctx2(_HALF, _HALF, F(0)),
            _ctx2(_HALF, _HALF, _A_THIRD_PAIR[i]),
        ),
    )


def _ap_system(i: int) -> System:
    s1, s2 = _AP_SINGLES
    return cyclic(
        3,
        (
            _ctx2(s1, s2, F(0)),
            _ctx2(s1, s2, _AP_SECOND_PAIR[i]),
            _ctx2(s1, s2, _AP_THIRD_PAIR[i]),
        ),
    )


def _b_named(name: str) -> System:
    triples = _B_TRIPLES[name]
    return b_system([_ctx3(*_UNIFORM3, t) for t in triples])


def _bp_named(name: str) -> System:
    triples = _BP_TRIPLES[name]
    return b_system([_ctx3(_BP_SINGLES, _BP_PAIRS, t) for t in triples])


def _h_named(name: str) -> System:
    triples = _H_TRIPLES[name]
    rows = tuple(_ctx3(*_UNIFORM3, t) for t in triples)
    return hypercyclic(HypercyclicSpec(3, 4, rows))


def _hp_named(name: str) -> System:
    rows = tuple(_ctx3(*row) for row in _HP_ROWS[name])
    return hypercyclic(HypercyclicSpec(3, 4, rows))


def _normalize(name: str) -> str:
    name = name.strip().replace("′", "'")
    if name.startswith("Babr(") and name.endswith(")"):
        name = name[5:-1]
    return name


def named(name: str) -> System:
    """Build a named benchmark system; raises KeyError for unknown ids."""
    key = _normalize(name)
    if key in ("A%d" % i for i in range(6)):
        return _a_system(int(key[1:]))
    if key in ("A'%d" % i for i in range(7)):
        return _ap_system(int(key[2:]))
    if key in _B_TRIPLES:
        return _b_named(key)
    if key in _BP_TRIPLES:
        return _bp_named(key)
    if key in _H_TRIPLES:
        return _h_named(key)
    if key in _HP_ROWS:
        return _hp_named(key)
    raise KeyError(f"unknown system id {name!r}")


def undisturbed_ids() -> list[str]:
    return (
        [f"A{i}" for i in range(6)]
        + ["B1", "B2"]
        + [f"H{i}" for i in range(4)]
    )


def disturbed_ids() -> list[str]:
    return (
        [f"A'{i}" for i in range(7)]
        + ["B'1", "B'2", "B'3"]
        + [f"H'{i}" for i in range(5)]
    )


def hypercyclic_ids() -> list[str]:
    return [f"H{i}" for i in range(4)] + [f"H'{i}" for i in range(5)]


def all_ids() -> list[str]:
    return (
        [f"A{i}" for i in range(6)]
        + [f"A'{i}" for i in range(7)]
        + ["B1", "B2", "B'1", "B'2", "B'3"]
        + [f"H{i}" for i in range(4)]
        + [f"H'{i}" for i in range(5)]
    )
