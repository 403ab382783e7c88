from __future__ import annotations

from dataclasses import dataclass

from .corpus import FAIL, NO, YES

FAIL_REASONS = ("error", "crash", "timeout", "undecodable", "not-stratified")


@dataclass(frozen=True)
class Outcome:
    """A validator's answer on one test: yes, no, or fail with a reason."""

    value: str
    reason: str | None = None

    def __post_init__(self):
        if self.value not in (YES, NO, FAIL):
            raise ValueError(f"unknown outcome {self.value!r}")
        if (self.value == FAIL) != (self.reason is not None):
            raise ValueError("exactly the failing outcomes carry a reason")

    @classmethod
    def yes(cls) -> "Outcome":
        return cls(YES)

    @classmethod
    def no(cls) -> "Outcome":
        return cls(NO)

    @classmethod
    def fail(cls, reason: str) -> "Outcome":
        return cls(FAIL, reason)

    @classmethod
    def parse(cls, text: "str | Outcome") -> "Outcome":
        """Accepts ``yes``, ``no``, ``fail`` and ``fail(reason)``."""
        if isinstance(text, Outcome):
            return text
        text = text.strip()
        if text == FAIL:
            return cls.fail("error")
        if text.startswith("fail(") and text.endswith(")"):
            return cls.fail(text[5:-1])
        return cls(text)

    @property
    def failed(self) -> bool:
        return self.value == FAIL

    def __str__(self) -> str:
        return f"fail({self.reason})" if self.failed else self.value
