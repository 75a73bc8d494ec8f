"""Canonical JSON format for systems.

Top-level object:
    {"questions": [{"id": "1", "values": ["+", "-"]}, ...],
     "contexts": [{"id": "1", "questions": ["1", "2"],
                   "distribution": {"atoms": {"++": "2/5", ...}}}, ...]}

A context distribution may instead be given as {"moments": {...}} with
comma-joined sorted question ids as subset keys.  Rationals are serialized
as "num/den" strings; decimal strings like "0.4" are accepted on input and
converted exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .model import DEFAULT_DOMAIN, JointDistribution, System, as_fraction, format_fraction
from .moments import MomentSpec, atoms_to_moments, moments_to_atoms


def _atom_key(values: tuple[str, ...]) -> str:
    if all(len(v) == 1 for v in values):
        return "".join(values)
    return ",".join(values)


def _parse_atom_key(key: str, arity: int) -> tuple[str, ...]:
    if "," in key:
        values = tuple(key.split(","))
    else:
        values = tuple(key)
    if len(values) != arity:
        raise ValueError(f"atom key {key!r} does not match {arity} variables")
    return values


def system_to_dict(s: System, provenance=None) -> dict:
    domains: dict[str, tuple[str, ...]] = {}
    for dist in s.contexts.values():
        for q, dom in zip(dist.variables, dist.domains):
            domains.setdefault(q, dom)
    out = {
        "questions": [
            {"id": q, "values": list(domains[q])} for q in sorted(domains)
        ],
        "contexts": [
            {
                "id": cid,
                "questions": list(dist.variables),
                "distribution": {
                    "atoms": {
                        _atom_key(k): format_fraction(v)
                        for k, v in sorted(dist.atoms.items())
                    }
                },
            }
            for cid, dist in s.contexts.items()
        ],
    }
    if provenance is not None:
        out["provenance"] = {
            cid: {"context": orig, "questions": list(qs)}
            for cid, (orig, qs) in provenance.items()
        }
    return out


def system_from_dict(data: dict) -> System:
    domains = {
        q["id"]: tuple(q["values"]) for q in data.get("questions", [])
    }
    contexts = {}
    for ctx in data["contexts"]:
        cid = str(ctx["id"])
        qs = tuple(str(q) for q in ctx["questions"])
        doms = tuple(domains.get(q, DEFAULT_DOMAIN) for q in qs)
        dist_spec = ctx["distribution"]
        if "atoms" in dist_spec:
            atoms = {
                _parse_atom_key(k, len(qs)): as_fraction(v)
                for k, v in dist_spec["atoms"].items()
            }
            contexts[cid] = JointDistribution(qs, atoms, doms)
        elif "moments" in dist_spec:
            values = {
                frozenset(k.split(",")): as_fraction(v)
                for k, v in dist_spec["moments"].items()
            }
            contexts[cid] = moments_to_atoms(MomentSpec(qs, values, doms))
        else:
            raise ValueError(f"context {cid}: distribution needs 'atoms' or 'moments'")
    return System(contexts)


def moments_to_dict(spec: MomentSpec) -> dict:
    return {
        "moments": {
            ",".join(sorted(k)): format_fraction(v) for k, v in sorted(
                spec.values.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))
            )
        }
    }


def system_to_json(s: System, provenance=None, indent: int | None = 2) -> str:
    return json.dumps(system_to_dict(s, provenance), indent=indent, sort_keys=False)


def system_from_json(text: str) -> System:
    return system_from_dict(json.loads(text))


def load_system(path) -> System:
    with open(path, "r", encoding="utf-8") as fh:
        return system_from_dict(json.load(fh))


def save_system(s: System, path, provenance=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(system_to_json(s, provenance))
        fh.write("\n")
