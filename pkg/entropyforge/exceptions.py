"""Exception hierarchy for entropyforge.

Every error raised on purpose by the package derives from EntropyForgeError,
so the CLI can turn any of them into a one-line message and exit status 2.
Validation errors also derive from ValueError: code that treats malformed
input generically keeps working.

Budget errors never mean "wrong answer". They mean the question could not be
settled within the configured cap, and they carry the cap and the offending
input size so the report can say which n ran out.
"""

from __future__ import annotations

from typing import Any


class EntropyForgeError(Exception):
    """Base class for all entropyforge errors."""


# ============================================================================
# CONFIGURATION AND SPECIFICATION
# ============================================================================


class ConfigValidationError(EntropyForgeError, ValueError):
    """A group config failed schema validation or could not be parsed.

    Attributes:
        path: Dotted path of the offending key (empty for parse errors)
        line: 1-based line in the source text, when known
        column: 1-based column in the source text, when known
        source: File the text came from, when known
    """

    def __init__(
        self,
        message: str,
        path: str = "",
        line: int | None = None,
        column: int | None = None,
        source: str | None = None,
    ) -> None:
        self.path = path
        self.line = line
        self.column = column
        self.source = source
        super().__init__(message)

    def location(self, source: str = "<config>") -> str:
        """Render the position as ``source:line:col`` (or just the source).

        The file recorded on the error, if any, wins over ``source``.
        """
        source = self.source or source
        if self.line is None:
            return source
        return f"{source}:{self.line}:{self.column or 1}"


class SpecValidationError(EntropyForgeError, ValueError):
    """A group description is structurally invalid (valency, c, saturation)."""


class InvalidVertexError(EntropyForgeError, ValueError):
    """A vertex index is outside the valency of its level."""


class InvalidRayError(EntropyForgeError, ValueError):
    """A ray is not of the form u followed by the spine."""


class NonAbelianBoundaryError(EntropyForgeError, ValueError):
    """An operation that needs an abelian boundary group got a non-abelian one."""


# ============================================================================
# BUDGETS
# ============================================================================


class BudgetExceededError(EntropyForgeError):
    """A computation hit its configured cap.

    Attributes:
        budget: The cap that was exceeded
        n: Input size that triggered it (word length or walk time), if known
    """

    def __init__(self, message: str, budget: int, n: int | None = None) -> None:
        self.budget = budget
        self.n = n
        super().__init__(message)


class WordProblemBudgetError(BudgetExceededError):
    """Triviality or normal-form recursion visited too many states."""


class DistributionBudgetError(BudgetExceededError):
    """Exact convolution produced too many distinct elements."""


class BallBudgetError(BudgetExceededError):
    """Breadth-first ball exceeded its size cap."""


# ============================================================================
# EXPONENTS AND DESIGNERS
# ============================================================================


class InadmissibleTargetError(EntropyForgeError, ValueError):
    """A design target is outside [beta_d, beta_D] or otherwise inconsistent."""


class ThresholdError(EntropyForgeError, ValueError):
    """n is below the first threshold of an exponent sequence."""


class PreconditionError(EntropyForgeError, ValueError):
    """A function failed the growth precondition of the greedy approximation.

    Attributes:
        witness: The checkpoint x at which the condition failed
        condition: Which side failed ("lower" or "upper")
    """

    def __init__(self, message: str, witness: Any, condition: str) -> None:
        self.witness = witness
        self.condition = condition
        super().__init__(message)


class TableError(EntropyForgeError, ValueError):
    """A sampled function table is empty or not sorted by argument."""


# ============================================================================
# DELTA
# ============================================================================


class QuotientRadiusError(EntropyForgeError):
    """A root-component word is longer than the agreement radius of its quotient.

    Attributes:
        level: Level of the block
        radius: Agreement radius of the block
        length: Letter count that was asked for
    """

    def __init__(self, level: int, radius: int, length: int) -> None:
        self.level = level
        self.radius = radius
        self.length = length
        super().__init__(
            f"Block at level {level} agrees with the free product only up to "
            f"radius {radius}; got a root component of {length} letters"
        )


class MissingQuotientError(EntropyForgeError, ValueError):
    """A block description cannot provide the quotient data it was asked for."""


class ScheduleError(EntropyForgeError, ValueError):
    """Scale radii are not increasing or their level windows overlap."""
