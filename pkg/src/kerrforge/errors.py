"""Exception types shared across the package."""


class KerrforgeError(Exception):
    """Base class for all package errors."""


class DomainError(KerrforgeError):
    """Point lies outside the admissible domain of a chart or potential."""


class DegeneracyError(KerrforgeError):
    """A quantity the construction divides by is (numerically) zero."""


class SignConditionError(KerrforgeError):
    """Sign constraint violated (boundary data or potential sign)."""


class SolverError(KerrforgeError):
    """The discrete linear system could not be solved reliably."""


class ConfigError(KerrforgeError):
    """Invalid or incomplete run configuration."""
