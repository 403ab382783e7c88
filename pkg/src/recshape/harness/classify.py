"""Which semantics is a validator's behaviour consistent with?"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .corpus import COLUMNS, SEPARATION_IDS, builtin_tests
from .outcome import Outcome

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
IGNORING_FAILURES = "consistent-ignoring-failures"


@dataclass
class ConsistencyReport:
    status: dict[str, str]
    evidence: dict[str, list[tuple[str, str, str]]] = field(default_factory=dict)

    def consistent_with(self, column: str, ignore_failures: bool = False) -> bool:
        ok = (CONSISTENT, IGNORING_FAILURES) if ignore_failures else (CONSISTENT,)
        return self.status[column] in ok

    def to_json(self) -> dict:
        return {
            col: {
                "status": self.status[col],
                "evidence": [{"test": t, "observed": o, "expected": e} for t, o, e in self.evidence[col]],
            }
            for col in COLUMNS
        }


def classify(results: Mapping[str, "Outcome | str"]) -> ConsistencyReport:
    """Compare observed outcomes on the separation tests with each semantics."""
    missing = [t for t in SEPARATION_IDS if t not in results]
    if missing:
        raise ValueError(f"results are missing separation tests: {', '.join(missing)}")
    expected = {t.id: t.expected for t in builtin_tests() if t.id in SEPARATION_IDS}
    observed = {t: Outcome.parse(results[t]) for t in SEPARATION_IDS}
    status, evidence = {}, {}
    for col in COLUMNS:
        mismatches = [
            (t, str(observed[t]), expected[t][col])
            for t in SEPARATION_IDS
            if not observed[t].failed and observed[t].value != expected[t][col]
        ]
        evidence[col] = mismatches
        if mismatches:
            status[col] = INCONSISTENT
        elif any(o.failed for o in observed.values()):
            status[col] = IGNORING_FAILURES
        else:
            status[col] = CONSISTENT
    return ConsistencyReport(status, evidence)


_SYMBOL = {"yes": "y", "no": "n"}


def _cell(o: "Outcome | str") -> str:
    o = Outcome.parse(o)
    return "X" if o.failed else _SYMBOL[o.value]


def format_table(rows: Mapping[str, Mapping[str, "Outcome | str"]], test_ids=SEPARATION_IDS) -> str:
    """Plain-text table: one row per test, one column per validator, then the four semantics."""
    expected = {t.id: t.expected for t in builtin_tests()}
    names = list(rows)
    header = ["test", *names, *COLUMNS]
    body = []
    for tid in test_ids:
        cells = [tid] + [_cell(rows[n][tid]) if tid in rows[n] else "-" for n in names]
        cells += [_SYMBOL.get(expected[tid][c], "-") for c in COLUMNS]
        body.append(cells)
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header, *body]]
    return "\n".join(lines) + "\n"


def format_report(name: str, report: ConsistencyReport) -> str:
    lines = [f"{name}:"]
    for col in COLUMNS:
        line = f"  {col}: {report.status[col]}"
        if report.evidence[col]:
            cited = ", ".join(f"{t} (observed {o}, expected {e})" for t, o, e in report.evidence[col])
            line += f" [{cited}]"
        lines.append(line)
    return "\n".join(lines) + "\n"
