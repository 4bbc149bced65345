"""InequalityReport and its JSON / CSV serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .zoo import FamilySpec

VERDICTS = ("pass", "fail", "report-only", "under-resolved")
JSON_FIELDS = ("theorem_id", "family_id", "params", "r", "p", "lhs", "rhs", "margin",
               "error_budget", "verdict", "metadata")
CSV_COLUMNS = ("theorem_id", "family_id", "params", "r", "p", "lhs", "rhs", "margin",
               "error_budget", "verdict", "metadata")


@dataclass(frozen=True)
class InequalityReport:
    theorem_id: str
    family: FamilySpec
    r: float | None
    p: float | None
    lhs: float
    rhs: float
    margin: float
    error_budget: float
    verdict: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def failed(self) -> bool:
        return self.verdict == "fail"

    def sort_key(self):
        return (
            self.theorem_id,
            self.family.family_id,
            tuple(sorted(self.family.params.items())),
            -1.0 if self.r is None else self.r,
            -1.0 if self.p is None else self.p,
        )

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "family_id": self.family.family_id,
            "params": {k: _num(v) for k, v in sorted(self.family.params.items())},
            "r": _num(self.r),
            "p": _num(self.p),
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "margin": _num(self.margin),
            "error_budget": _num(self.error_budget),
            "verdict": self.verdict,
            "metadata": {k: _num(v) for k, v in sorted(self.metadata.items())},
        }


def _num(x):
    """JSON has no NaN/inf; those become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def sort_reports(reports):
    return sorted(reports, key=InequalityReport.sort_key)


def to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in sort_reports(reports)], indent=2) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, dict):
        return ";".join(f"{k}={_cell(x)}" for k, x in v.items())
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in sort_reports(reports):
        d = rep.to_dict()
        w.writerow([_cell(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()
