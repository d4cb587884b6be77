"""Verification-suite entries and the aggregate dashboard."""

from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any


class SuiteLevel(Enum):
    """Grid sizes used by the suite."""

    SMALL = auto()
    FULL = auto()

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "SuiteLevel":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"Unsupported suite level: {text}") from None


@dataclass(frozen=True)
class SuiteEntry:
    """One check of the suite.

    ``expect_success`` is False for negative controls, which are green when
    they fail.
    """

    name: str
    group: str
    expect_success: bool
    succeeded: bool
    detail: str = ""
    error: str | None = None
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def green(self) -> bool:
        return self.succeeded == self.expect_success


@dataclass(frozen=True)
class SuiteReport:
    """All entries of one suite run, ordered by name."""

    level: SuiteLevel
    entries: tuple[SuiteEntry, ...]

    @property
    def green(self) -> bool:
        return all(e.green for e in self.entries)

    @property
    def failures(self) -> tuple[SuiteEntry, ...]:
        return tuple(e for e in self.entries if not e.green)

    def counts(self) -> dict[str, int]:
        green = sum(1 for e in self.entries if e.green)
        return {"total": len(self.entries), "green": green, "red": len(self.entries) - green}
