"""Exception types shared across the package."""

from __future__ import annotations


class RecshapeError(Exception):
    """Base class for every error raised by recshape."""


class SchemaError(RecshapeError, ValueError):
    """Malformed schema document or catalogue."""


class UndeclaredName(SchemaError):
    def __init__(self, name: str):
        super().__init__(f"undeclared shape name {name}")
        self.name = name


class DialectError(SchemaError):
    pass


class NotStratified(RecshapeError):
    """The catalogue has a dependency cycle through negation."""

    def __init__(self, cycle: list[str], stage: str | None = None):
        self.cycle = list(cycle)
        self.stage = stage
        shown = " -> ".join(self.cycle)
        prefix = f"[{stage}] " if stage else ""
        super().__init__(f"{prefix}catalogue is not stratified: negative cycle {shown}")


class NonDualizable(RecshapeError):
    pass


class FragmentViolation(RecshapeError):
    def __init__(self, fragment: str, problems: list[str]):
        self.fragment = fragment
        self.problems = list(problems)
        super().__init__(f"not in {fragment}: " + "; ".join(self.problems))


class NotShallow(RecshapeError):
    pass


class BoundExceeded(RecshapeError):
    pass


class SearchBudgetExceeded(RecshapeError):
    pass


class SizeLimitExceeded(RecshapeError):
    pass


class StageError(RecshapeError):
    """An error raised inside a translation stage, tagged with that stage."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")
