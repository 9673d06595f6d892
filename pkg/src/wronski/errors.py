"""Exception hierarchy for the wronski package."""

from collections.abc import Sequence
from typing import Any


class WronskiError(ValueError):
    """Base class for all errors raised by wronski."""


class ZeroPolynomialError(WronskiError):
    def __init__(self) -> None:
        super().__init__("zero polynomial has no root multiset")


class DegenerateSpaceError(WronskiError):
    def __init__(self, detail: str = "") -> None:
        message = "degenerate space"
        super().__init__(f"{message}: {detail}" if detail else message)


class ZeroWronskianError(WronskiError):
    def __init__(self) -> None:
        super().__init__("identically zero Wronskian")


class CoincidentBasesError(WronskiError):
    def __init__(self, i: int, j: int) -> None:
        super().__init__(f"bases {i} and {j} coincide; use confluent_limit")


class NonFuchsianError(WronskiError):
    """Operator table lacks the top-order coefficient at an extreme x-power."""


class UnramifiedError(WronskiError):
    def __init__(self, detail: str = "") -> None:
        message = "space not unramified-compatible"
        super().__init__(f"{message}: {detail}" if detail else message)


class KernelDeficiencyError(WronskiError):
    """Quasi-exponential kernel search hit its degree bound.

    Attributes:
        partial: Kernel members found before giving up.
        expected: Kernel dimension that was expected.
    """

    def __init__(self, partial: Sequence[Any], expected: int) -> None:
        self.partial = tuple(partial)
        self.expected = expected
        super().__init__(
            f"found {len(self.partial)} of {expected} kernel members; raise degree_bound"
        )


class SearchTooLargeError(WronskiError):
    def __init__(self, n: int) -> None:
        super().__init__(f"bipartition search too large (n={n} > 12)")


class GridTooLargeError(WronskiError):
    def __init__(self, points: int) -> None:
        super().__init__(f"grid too fine: {points} points exceeds 10^6")


class HypothesisError(WronskiError):
    """Input violates a precondition the operation relies on."""


class SingularOperatorError(WronskiError):
    """Operator is numerically singular.

    Attributes:
        condition: Estimated 2-norm condition number.
    """

    def __init__(self, label: str, condition: float) -> None:
        self.condition = condition
        super().__init__(f"{label} is near-singular (condition number {condition:.3e})")
