"""Calibration of the program defaults against published anchor values.

The degree pipeline has two construction choices that the defining papers
leave open: the CNT2 objective (which rows may deviate, and in which basis
the L1 distance is taken) and the connection-row value set.  The anchors
below pin them:

* A1 must give CNT2 = 1/10, CNT3 = 1/10, CNTF = 1/5;
* B1 must give CNT2 = 1/24 -- this discriminates the free moment-basis
  distance (the calibrated default) from the hard-context variant, which
  yields 1/12 on B1 while agreeing on every cyclic system.

run_calibration() evaluates both CNT2 variants, selects the one matching the
anchors (erroring if neither does), and can write the outcome to
CALIBRATION.md.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F

from .catalog import named
from .measures import Options, degree
from .model import format_fraction

ANCHORS_A1 = {"cnt2": F(1, 10), "cnt3": F(1, 10), "cntf": F(1, 5)}
ANCHOR_B1_CNT2 = F(1, 24)


@dataclass
class CalibrationReport:
    ok: bool
    cnt2_objective: str
    lines: list[str] = field(default_factory=list)

    def markdown(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = [
            "# Calibration",
            "",
            f"Status: **{status}**",
            "",
            f"Selected CNT2 objective: `{self.cnt2_objective}`",
            "",
            "The CNT2 value is the L1 distance from the system's row-target",
            "vector to the polytope of achievable vectors.  Two constructions",
            "are implemented: `free-moments` lets every moment-basis row",
            "deviate (only total mass is hard), `hard-atoms` holds the context",
            "distributions fixed and penalizes only the connection",
            "min-coincidence rows.  Both reproduce every cyclic anchor; only",
            "`free-moments` also reproduces the published three-variable-context",
            "values (B1 distance 1/24 rather than 1/12), so it is the default.",
            "",
            "## Checks",
            "",
        ]
        out.extend(f"- {line}" for line in self.lines)
        return "\n".join(out) + "\n"


def _check(lines: list[str], label: str, got, want) -> bool:
    ok = got == want
    lines.append(
        f"{label}: computed {format_fraction(got)}, expected {format_fraction(want)}"
        f" -> {'ok' if ok else 'MISMATCH'}"
    )
    return ok


def run_calibration(write_path: str | None = None) -> CalibrationReport:
    lines: list[str] = []
    a1 = named("A1")
    b1 = named("B1")

    ok = True
    for measure, want in ANCHORS_A1.items():
        got = degree(a1, measure).value
        ok = _check(lines, f"A1 {measure}", got, want) and ok

    chosen = "free-moments"
    got_free = degree(b1, "cnt2", Options(cnt2_objective="free-moments")).value
    free_ok = _check(lines, "B1 cnt2 (free-moments)", got_free, ANCHOR_B1_CNT2)
    if not free_ok:
        got_hard = degree(b1, "cnt2", Options(cnt2_objective="hard-atoms")).value
        hard_ok = _check(lines, "B1 cnt2 (hard-atoms)", got_hard, ANCHOR_B1_CNT2)
        if hard_ok:
            chosen = "hard-atoms"
            lines.append("selected the alternative objective axis: hard-atoms")
        else:
            ok = False
    report = CalibrationReport(ok and (free_ok or chosen == "hard-atoms"), chosen, lines)
    if write_path:
        with open(write_path, "w", encoding="utf-8") as fh:
            fh.write(report.markdown())
    return report
