"""Published concatenation-grid values and their reproduction.

TABLE1 covers the undisturbed grid (A0-A5 x B1-B2), TABLE2 the disturbed one
(A'0-A'6 x B'1-B'3).  Each table stores, per measure, the A-part degrees d2,
the B-part increments Delta3, and every concatenated degree d3.  One printed
cell is known to be inconsistent with the others and carries an override;
reproduction flags it instead of failing (see KNOWN_TYPOS).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F

from .catalog import named
from .levels import level_representation
from .measures import MEASURES, Options, degree
from .model import format_fraction
from .profiles import concatenate

A_IDS = [f"A{i}" for i in range(6)]
AP_IDS = [f"A'{i}" for i in range(7)]
B_IDS = ["B1", "B2"]
BP_IDS = ["B'1", "B'2", "B'3"]


def _fr(xs):
    return tuple(F(x) for x in xs)


TABLE1 = {
    "cnt2": {
        "d2": _fr(["0", "1/10", "1/5", "3/10", "2/5", "1/2"]),
        "delta3": {"B1": F(1, 24), "B2": F(1, 8)},
        "cells": {
            "B1": _fr(["1/24", "17/120", "29/120", "41/120", "53/120", "13/24"]),
            "B2": _fr(["1/8", "9/40", "13/40", "17/40", "21/40", "5/8"]),
        },
    },
    "cnt3": {
        "d2": _fr(["0", "1/10", "1/5", "3/10", "2/5", "1/2"]),
        "delta3": {"B1": F(1, 18), "B2": F(1, 6)},
        "cells": {
            "B1": _fr(["1/18", "1/10", "1/5", "3/10", "2/5", "1/2"]),
            "B2": _fr(["1/6", "1/6", "1/5", "3/10", "2/5", "1/2"]),
        },
    },
    "cntf": {
        "d2": _fr(["0", "1/5", "2/5", "3/5", "4/5", "1"]),
        "delta3": {"B1": F(1, 6), "B2": F(1, 2)},
        "cells": {
            "B1": _fr(["1/6", "1/5", "2/5", "3/5", "4/5", "1"]),
            "B2": _fr(["1/2", "1/2", "1/2", "3/5", "4/5", "1"]),
        },
    },
}

TABLE2 = {
    "cnt2": {
        "d2": _fr(["0", "1/18", "1/9", "1/6", "2/9", "5/18", "1/3"]),
        "delta3": {"B'1": F(1, 100), "B'2": F(5, 100), "B'3": F(9, 100)},
        "cells": {
            "B'1": _fr(["1/100", "59/900", "109/900", "159/900", "209/900", "259/900", "309/900"]),
            "B'2": _fr(["5/100", "19/180", "29/180", "13/60", "49/180", "59/180", "23/180"]),
            "B'3": _fr(["9/100", "131/900", "181/900", "77/300", "281/900", "331/900", "127/300"]),
        },
    },
    "cnt3": {
        "d2": _fr(["0", "1/18", "1/9", "1/6", "2/9", "5/18", "1/3"]),
        "delta3": {"B'1": F(2, 150), "B'2": F(1, 15), "B'3": F(3, 25)},
        "cells": {
            "B'1": _fr(["2/150", "1/18", "1/9", "1/6", "2/9", "5/18", "1/3"]),
            "B'2": _fr(["1/15", "1/15", "1/9", "1/6", "2/9", "5/18", "1/3"]),
            "B'3": _fr(["3/25", "3/25", "3/25", "1/6", "2/9", "5/18", "1/3"]),
        },
    },
    "cntf": {
        "d2": _fr(["0", "1/9", "2/9", "1/3", "4/9", "5/9", "2/3"]),
        "delta3": {"B'1": F(1, 25), "B'2": F(1, 5), "B'3": F(9, 25)},
        "cells": {
            "B'1": _fr(["1/25", "1/9", "2/9", "1/3", "4/9", "5/9", "2/3"]),
            "B'2": _fr(["1/5", "1/5", "2/9", "1/3", "4/9", "5/9", "2/3"]),
            "B'3": _fr(["9/25", "9/25", "9/25", "9/25", "4/9", "5/9", "2/3"]),
        },
    },
}


@dataclass(frozen=True)
class KnownTypo:
    table: str
    measure: str
    b_id: str
    a_id: str
    printed: F
    corrected: F
    reason: str


# The one printed cell inconsistent with its own grid: additivity gives
# 1/3 + 1/20 = 23/60, but 23/180 is printed.
KNOWN_TYPOS = (
    KnownTypo(
        "table2", "cnt2", "B'2", "A'6", F(23, 180), F(23, 60),
        "additivity of the L1 distance: d2 + delta3 = 1/3 + 1/20 = 23/60",
    ),
)


def typo_for(table: str, measure: str, b_id: str, a_id: str) -> KnownTypo | None:
    for typo in KNOWN_TYPOS:
        if (typo.table, typo.measure, typo.b_id, typo.a_id) == (table, measure, b_id, a_id):
            return typo
    return None


@dataclass
class CellResult:
    kind: str            # "d2" | "delta3" | "cell"
    measure: str
    a_id: str | None
    b_id: str | None
    computed: F
    expected: F
    ok: bool
    flag: str = ""


@dataclass
class TableReport:
    table: str
    results: list[CellResult] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def csv_lines(self) -> list[str]:
        lines = ["kind,measure,a,b,computed,expected,status,flag"]
        for r in self.results:
            status = "ok" if r.ok else "MISMATCH"
            lines.append(
                f"{r.kind},{r.measure},{r.a_id or ''},{r.b_id or ''},"
                f"{format_fraction(r.computed)},{format_fraction(r.expected)},{status},{r.flag}"
            )
        return lines

    def summary_lines(self) -> list[str]:
        n_ok = sum(r.ok for r in self.results)
        lines = [f"{self.table}: {n_ok}/{len(self.results)} entries match"]
        for r in self.results:
            if not r.ok:
                lines.append(
                    f"  MISMATCH {r.measure} {r.kind} a={r.a_id} b={r.b_id}: "
                    f"computed {format_fraction(r.computed)}, expected {format_fraction(r.expected)}"
                )
        lines.extend(f"  FLAG {f}" for f in self.flags)
        return lines


def _grid_ids(table: str) -> tuple[list[str], list[str], dict]:
    if table == "table1":
        return A_IDS, B_IDS, TABLE1
    if table == "table2":
        return AP_IDS, BP_IDS, TABLE2
    raise ValueError(f"unknown table {table!r}; choose table1 or table2")


def reproduce_table(
    table: str,
    options: Options | None = None,
    measures=MEASURES,
    jobs: int = 1,
) -> TableReport:
    """Recompute every header and cell of a table and diff against the
    published values (with the known-typo override applied)."""
    a_ids, b_ids, expected = _grid_ids(table)
    options = options or Options()
    report = TableReport(table)

    tasks = _table_tasks(table, a_ids, b_ids, measures)
    computed = _run_tasks(tasks, options, jobs)

    for measure in measures:
        exp = expected[measure]
        for i, a_id in enumerate(a_ids):
            value = computed[("d2", measure, a_id, None)]
            report.results.append(
                CellResult("d2", measure, a_id, None, value, exp["d2"][i], value == exp["d2"][i])
            )
        for b_id in b_ids:
            value = computed[("delta3", measure, None, b_id)]
            want = exp["delta3"][b_id]
            report.results.append(
                CellResult("delta3", measure, None, b_id, value, want, value == want)
            )
        for b_id in b_ids:
            for i, a_id in enumerate(a_ids):
                value = computed[("cell", measure, a_id, b_id)]
                want = exp["cells"][b_id][i]
                typo = typo_for(table, measure, b_id, a_id)
                if typo is not None:
                    ok = value == typo.corrected
                    flag = (
                        f"printed {format_fraction(typo.printed)} is a suspected typo; "
                        f"{typo.reason}"
                    )
                    report.flags.append(
                        f"{measure} cell ({b_id}, {a_id}): computed "
                        f"{format_fraction(value)}; {flag}"
                    )
                    report.results.append(
                        CellResult("cell", measure, a_id, b_id, value, typo.corrected, ok, flag)
                    )
                else:
                    report.results.append(
                        CellResult("cell", measure, a_id, b_id, value, want, value == want)
                    )
    return report


def _table_tasks(table, a_ids, b_ids, measures):
    tasks = []
    for measure in measures:
        for a_id in a_ids:
            tasks.append(("d2", measure, a_id, None))
        for b_id in b_ids:
            tasks.append(("delta3", measure, None, b_id))
        for b_id in b_ids:
            for a_id in a_ids:
                tasks.append(("cell", measure, a_id, b_id))
    return tasks


def compute_task(task, options: Options):
    kind, measure, a_id, b_id = task
    if kind == "d2":
        system = level_representation(named(a_id), 2).system
    elif kind == "delta3":
        system = level_representation(named(b_id), 3).system
    else:
        joint = concatenate(named(a_id), named(b_id))
        system = level_representation(joint, 3).system
    return task, degree(system, measure, options).value


def _run_tasks(tasks, options: Options, jobs: int) -> dict:
    if jobs <= 1:
        return dict(compute_task(t, options) for t in tasks)
    import concurrent.futures

    out = {}
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(compute_task, t, options) for t in tasks]
        for fut in futures:
            task, value = fut.result()
            out[task] = value
    return out
