"""Level-n representations: each context replaced by its n-variable marginals.

A context with m <= n variables is kept unchanged (its id untouched); a
context with m > n variables becomes C(m, n) sub-contexts "c.1", "c.2", ...
indexed in lexicographic order of the sorted question ids, each carrying the
exact marginal distribution.  Only the n-subsets are emitted; lower-order
tuples are redundant for contextuality analysis.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import JointDistribution, System
from .moments import marginalize


@dataclass(frozen=True)
class LevelRepresentation:
    level: int
    system: System
    provenance: dict  # new context id -> (original context id, question subset)


def max_level(s: System) -> int:
    """Largest number of variables in any context."""
    return max(len(d.variables) for d in s.contexts.values())


def level_representation(s: System, n: int) -> LevelRepresentation:
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    contexts: dict[str, JointDistribution] = {}
    provenance: dict[str, tuple[str, tuple[str, ...]]] = {}
    for cid, dist in s.contexts.items():
        m = len(dist.variables)
        if m <= n:
            contexts[cid] = dist
            provenance[cid] = (cid, dist.variables)
            continue
        subsets = itertools.combinations(sorted(dist.variables), n)
        for i, subset in enumerate(subsets, start=1):
            ordered = tuple(q for q in dist.variables if q in subset)
            sub_id = f"{cid}.{i}"
            contexts[sub_id] = marginalize(dist, ordered)
            provenance[sub_id] = (cid, ordered)
    return LevelRepresentation(n, System(contexts), provenance)
