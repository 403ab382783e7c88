"""Running built-in tests against the internal engine."""

from __future__ import annotations

from ..engine.validate import SEMANTICS, validate
from ..errors import NotStratified, RecshapeError
from .corpus import COLUMN_SEMANTICS, COLUMNS, SEPARATION, TestCase, builtin_tests
from .outcome import Outcome


def _semantics(name: str) -> str:
    if name in COLUMN_SEMANTICS:
        return COLUMN_SEMANTICS[name]
    if name in SEMANTICS:
        return name
    raise ValueError(f"unknown semantics {name!r}")


def run_internal(t: TestCase, semantics: str) -> Outcome:
    """Validate one test; failures come back as values, never as exceptions."""
    try:
        verdict = validate(t.schema, t.graph, _semantics(semantics))
    except NotStratified:
        return Outcome.fail("not-stratified")
    except RecshapeError:
        return Outcome.fail("error")
    return Outcome.yes() if verdict.conforms else Outcome.no()


def expected_outcome(t: TestCase, column: str) -> Outcome:
    table = t.expected if t.kind == SEPARATION else t.engine_expected
    value = table[column]
    return Outcome.fail("not-stratified") if value == "fail" else Outcome(value)


def run_testsuite() -> list[tuple[TestCase, str, Outcome, Outcome]]:
    """``(test, column, observed, expected)`` for every test and semantics column."""
    rows = []
    for t in sorted(builtin_tests(), key=lambda t: t.id):
        for col in COLUMNS:
            rows.append((t, col, run_internal(t, col), expected_outcome(t, col)))
    return rows


def summarize(rows) -> tuple[int, int, int, int]:
    """(separation matches, separation total, feature matches, feature total)."""
    sep = [r for r in rows if r[0].kind == SEPARATION]
    feat = [r for r in rows if r[0].kind != SEPARATION]
    return (
        sum(obs == exp for _, _, obs, exp in sep),
        len(sep),
        sum(obs == exp for _, _, obs, exp in feat),
        len(feat),
    )
