"""Exception hierarchy.

Errors fall into two families so callers (the CLI in particular) can map
them to exit codes: :class:`DataError` for problems with input files or
datasets, everything else deriving from :class:`GaussianizeError` for
failed computations.
"""


class GaussianizeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(GaussianizeError, ValueError):
    """A value lies outside the domain of a transform or function."""

    def __init__(self, kind, value, index=None, message=None):
        self.kind = kind
        self.value = value
        self.index = index
        if message is None:
            where = "" if index is None else f" at index {index}"
            message = f"{kind}: value {value!r}{where} is outside the transform domain"
        super().__init__(message)


class DegenerateInput(GaussianizeError, ValueError):
    """Input is constant (or otherwise carries no spread)."""


class EmptyInput(GaussianizeError, ValueError):
    pass


class InvalidReference(GaussianizeError, ValueError):
    pass


class SingularCovariance(GaussianizeError):
    """Cholesky factorization failed even after the largest jitter."""


class ClassifierDivergence(GaussianizeError, ArithmeticError):
    pass


class DegenerateLabels(GaussianizeError, ValueError):
    pass


class MismatchedDimensions(GaussianizeError, ValueError):
    pass


class TransformMismatch(GaussianizeError, ValueError):
    """A classifier was evaluated with a transform other than its training transform."""


class InvalidSpec(GaussianizeError, ValueError):
    pass


class DataError(GaussianizeError):
    """Base class for dataset and file problems."""


class InsufficientData(DataError, ValueError):
    def __init__(self, message, class_name=None):
        self.class_name = class_name
        super().__init__(message)


class ParseError(DataError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)


class SplitError(DataError, ValueError):
    pass


class ValidationError(DataError, ValueError):
    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        super().__init__(message)
