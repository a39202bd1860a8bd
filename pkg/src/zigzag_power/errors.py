"""Exception hierarchy.

Every error raised on invalid input derives from :class:`GofError`, which is a
``ValueError`` so callers that only care about bad input can catch that.
"""


class GofError(ValueError):
    """Base class for all input and computation errors in this package."""


class InvalidProbabilities(GofError):
    pass


class NegativeOrOversizedProbability(InvalidProbabilities):
    pass


class SumNotOne(InvalidProbabilities):
    def __init__(self, total: float):
        self.total = total
        super().__init__(f"cell probabilities sum to {total!r}, expected 1")


class TooFewCategories(InvalidProbabilities):
    pass


class NonpositiveShape(GofError):
    pass


class UnknownCatalogName(GofError):
    pass


class UnknownDistributionName(UnknownCatalogName):
    pass


class DimensionMismatch(GofError):
    pass


class ZeroExpectedCell(GofError):
    pass


class EmptySample(GofError):
    pass


class InteriorDegenerateH(GofError):
    pass


class EmptyDistribution(GofError):
    pass


class DegenerateBracket(GofError):
    pass


class OutcomeSpaceTooLarge(GofError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"outcome space has {size} compositions, cap is {cap}")


class InvalidParameter(GofError):
    pass


class ConfigSyntaxError(GofError):
    """Malformed configuration text; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")
