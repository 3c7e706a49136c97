"""Exception classes for the masslump library."""

USAGE_EXIT_CODE = 2
NUMERIC_EXIT_CODE = 3
IO_EXIT_CODE = 4


class MassLumpError(Exception):
    """Base exception class for the masslump library.

    ``exit_code`` is the process status the command-line tool uses when the
    error reaches it.
    """

    default_exit_code = USAGE_EXIT_CODE

    def __init__(self, message: str, exit_code: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code if exit_code is not None else self.default_exit_code


class ValidationError(MassLumpError):
    """Raised when parameters fail validation."""
    pass


class DomainError(MassLumpError):
    """Raised when an operation is called outside its mathematical domain."""
    pass


class NoRootError(MassLumpError):
    """Raised when a function has no plus-to-minus sign change on the scan interval."""
    pass


class SignChangeError(MassLumpError):
    """Raised when an empirical order is requested across a sign change."""
    pass


class AllNodesExcludedError(MassLumpError):
    """Raised when every node falls under the relative-norm exclusion threshold."""
    pass


class InvalidMeshError(MassLumpError):
    """Raised when mesh construction arguments are invalid."""
    pass


class DegenerateElementError(MassLumpError):
    """Raised when a simplex has zero or negative volume."""

    default_exit_code = NUMERIC_EXIT_CODE

    def __init__(
        self, message: str, element: int | None = None, exit_code: int | None = None
    ) -> None:
        super().__init__(message, exit_code)
        self.element = element


class NonPositiveLumpingError(MassLumpError):
    """Raised when a lumped mass entry is not strictly positive."""

    default_exit_code = NUMERIC_EXIT_CODE

    def __init__(
        self, message: str, row: int | None = None, exit_code: int | None = None
    ) -> None:
        super().__init__(message, exit_code)
        self.row = row


class SolveFailureError(MassLumpError):
    """Raised when the mass-matrix solve does not reach its tolerance."""

    default_exit_code = NUMERIC_EXIT_CODE

    def __init__(
        self,
        message: str,
        iterations: int | None = None,
        residual: float | None = None,
        exit_code: int | None = None,
    ) -> None:
        super().__init__(message, exit_code)
        self.iterations = iterations
        self.residual = residual


class NonFiniteError(MassLumpError):
    """Raised when a time-stepped state stops being finite."""

    default_exit_code = NUMERIC_EXIT_CODE

    def __init__(
        self, message: str, time: float | None = None, exit_code: int | None = None
    ) -> None:
        super().__init__(message, exit_code)
        self.time = time


class InternalMismatchError(MassLumpError):
    """Raised when two independent evaluations of the same quantity disagree."""

    default_exit_code = NUMERIC_EXIT_CODE


class MeshParseError(MassLumpError):
    """Raised when mesh text is malformed."""

    default_exit_code = IO_EXIT_CODE

    def __init__(
        self, message: str, line_number: int | None = None, exit_code: int | None = None
    ) -> None:
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message, exit_code)
        self.line_number = line_number
