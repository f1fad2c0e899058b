"""Exception types raised by the package."""


class DegenerateInputError(ValueError):
    """Input is well-formed but numerically degenerate (zero scale, not PD)."""


class DomainError(ValueError):
    """A value lies outside the domain of a transform (e.g. log of <= 0)."""


class ParseError(ValueError):
    """A data file could not be parsed."""
