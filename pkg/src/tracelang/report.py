"""Shared result types for checkers, law suites and the CLI."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class Verdict(enum.Enum):
    """Three-valued checker outcome. FAILS always carries a counterexample;
    UNKNOWN means a search cap was hit, never that a violation was found."""

    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"

    def __bool__(self) -> bool:
        return self is Verdict.HOLDS


@dataclass
class LawResult:
    """Outcome of validating one law/rule on a batch of instances."""

    name: str
    passed: bool
    trials: int
    counterexample: str | None = None

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = f"  [{self.counterexample}]" if self.counterexample else ""
        return f"{status:5s} {self.name} ({self.trials} instances){extra}"


@dataclass
class CheckEntry:
    """One property line of a structure or derivation report."""

    name: str
    passed: bool
    detail: str | None = None

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        return f"{status:5s} {self.name}{extra}"


@dataclass
class Report:
    """A named bundle of check entries; truthy when everything passed."""

    title: str
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def __bool__(self) -> bool:
        return self.ok

    def add(self, name: str, passed: bool, detail: str | None = None) -> None:
        self.entries.append(CheckEntry(name, passed, detail))

    def lines(self) -> list[str]:
        return [f"== {self.title}"] + ["  " + e.line() for e in self.entries]

    def __str__(self) -> str:
        return "\n".join(self.lines())
