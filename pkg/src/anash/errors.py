"""Exception hierarchy shared by the solver, the oracle and the CLI.

The CLI maps these onto exit codes: usage errors exit 2, parse/input
errors exit 3, guarantee violations exit 4, solver failures and internal
invariant violations exit 5.
"""


class AnashError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(AnashError):
    """Malformed in-memory object: dimension mismatch, bad LP shape."""


class ParameterError(AnashError):
    """A parameter is outside its documented range."""


class InputError(AnashError):
    """Input data is unusable (non-finite entries, out-of-range payoffs)."""


class ParseError(AnashError):
    """A file could not be parsed. Carries a position when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


class UsageError(AnashError):
    """Bad CLI invocation."""


class SolverFailureError(AnashError):
    """Numerical breakdown inside the LP solver or the pipeline.

    ``last_iterate`` holds the most recent feasible point when one exists.
    """

    def __init__(self, message, last_iterate=None):
        self.last_iterate = last_iterate
        super().__init__(message)


class GuaranteeViolationError(AnashError):
    """The constructed profile missed the regret bound it must satisfy.

    This is the headline theorem's runtime assertion and must never fire;
    ``trace`` carries the full construction record for the post-mortem.
    """

    def __init__(self, message, trace=None):
        self.trace = trace
        super().__init__(message)


class InvariantViolationError(AnashError):
    """An internal relation that is provably true was observed false."""
