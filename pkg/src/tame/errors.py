class TameError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class InputError(TameError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class NumericalError(TameError, ArithmeticError):
    """Non-finite values appeared during an iteration."""

    exit_code = 3


class DegenerateIterateError(NumericalError):
    """The shifted iterate vanished; a positive shift avoids this."""

    exit_code = 3


class EmptyConstraintError(NumericalError):
    """No triangles survive the similarity constraint on either graph."""

    exit_code = 3


class OracleLimitError(TameError, RuntimeError):
    """The explicit product tensor would be too large to materialize."""
