"""Shared verdicts, findings, and report rendering for every checker.

A check never raises on a law violation. It emits findings, one per
inspected instance, and the report passes iff no finding carries the
"fail" verdict. The other verdicts flag instances the chart could not
decide: a universally quantified law with no internal witness is
"vacuous", a construction that leaves the truncation bound is
"out-of-bound", a conditional law whose premise never holds is
"premise-failure", and a check that needs at least one internal witness
the chart lacks is "chart-too-shallow".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

PASS = "pass"
FAIL = "fail"
VACUOUS = "vacuous"
OUT_OF_BOUND = "out-of-bound"
PREMISE_FAILURE = "premise-failure"
SHALLOW = "chart-too-shallow"

VERDICTS = (PASS, FAIL, VACUOUS, OUT_OF_BOUND, PREMISE_FAILURE, SHALLOW)


class InputError(ValueError):
    """Malformed tables or unknown identifiers. The CLI maps this to exit 2."""


class ChartTooShallow(Exception):
    """A constructive operation needed an internal witness the chart lacks."""

    def __init__(self, subject: str, missing: str):
        self.subject = subject
        self.missing = missing
        super().__init__(f"{subject}: chart too shallow, missing {missing}")


@dataclass(frozen=True)
class Finding:
    verdict: str
    law: str
    subject: str
    detail: str = ""

    def line(self) -> str:
        head = f"[{self.verdict}] {self.law} @ {self.subject}"
        return head + (f" :: {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class Report:
    title: str
    findings: tuple[Finding, ...]

    @property
    def passed(self) -> bool:
        return all(f.verdict != FAIL for f in self.findings)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for f in self.findings:
            out[f.verdict] += 1
        return out

    def by_verdict(self, verdict: str) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.verdict == verdict)

    def render(self) -> str:
        lines = [f"== {self.title} =="]
        lines.extend(f.line() for f in self.findings)
        c = self.counts()
        lines.append("summary: " + " ".join(f"{v}={c[v]}" for v in VERDICTS))
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_machine(self) -> str:
        """One tab-separated record per finding: verdict, law, subject, detail."""
        lines = [f"{f.verdict}\t{f.law}\t{f.subject}\t{f.detail}" for f in self.findings]
        return "\n".join(lines) + "\n" if lines else ""

    def to_json(self) -> str:
        payload = {
            "title": self.title,
            "findings": [
                {
                    "verdict": f.verdict,
                    "law": f.law,
                    "subject": f.subject,
                    "detail": f.detail,
                }
                for f in self.findings
            ],
            "counts": self.counts(),
            "passed": self.passed,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def report(title: str, findings: Iterable[Finding]) -> Report:
    return Report(title=title, findings=tuple(findings))


def merge(title: str, reports: Iterable[Report]) -> Report:
    """Concatenate sub-reports, prefixing each law with its report title."""
    out: list[Finding] = []
    for r in reports:
        for f in r.findings:
            out.append(Finding(f.verdict, f"{r.title}.{f.law}", f.subject, f.detail))
    return Report(title=title, findings=tuple(out))
