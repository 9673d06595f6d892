"""Outcome records shared by every verification sweep."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Outcome(Enum):
    """Possible outcomes of a single check."""

    PASS = "pass"
    FAIL = "fail"
    NO_CLAIM = "no_claim"
    ERROR = "error"


@dataclass(frozen=True)
class CheckResult:
    """Result of one verification instance.

    Attributes:
        check: Name of the property being checked.
        index: Work item index within its sweep.
        outcome: PASS, FAIL, NO_CLAIM (hypotheses not met) or ERROR.
        metrics: Numeric measurements such as residuals or margins.
        detail: Short free-text note, empty when nothing to add.
    """

    check: str
    index: int
    outcome: Outcome
    metrics: dict[str, Any] = field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome is not Outcome.FAIL and self.outcome is not Outcome.ERROR

    def to_dict(self) -> dict[str, Any]:
        """Serialize result to dictionary for JSON export."""
        result: dict[str, Any] = {
            "check": self.check,
            "index": self.index,
            "outcome": self.outcome.value,
            **self.metrics,
        }
        if self.detail:
            result["detail"] = self.detail
        return result


def verdict(ok: bool) -> Outcome:
    return Outcome.PASS if ok else Outcome.FAIL
