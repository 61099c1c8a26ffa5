"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularInputError(ValueError):
    """The input hits a singularity of the requested transform."""


class RangeError(ValueError):
    """A parameter violates a stated admissibility range."""


class UnsupportedOrderError(ValueError):
    """The requested transform order is outside the implemented range."""


class ConfigError(ValueError):
    """A configuration string or file could not be parsed."""
