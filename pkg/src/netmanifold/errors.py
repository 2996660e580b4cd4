"""Exception hierarchy.

Two broad branches, matching the CLI exit codes: ValidationError (bad
arguments, malformed files, schema violations) maps to exit code 2, and
NumericalError (data-dependent failures discovered during computation) maps
to exit code 3.
"""


class ValidationError(ValueError):
    """Invalid argument, file format, or configuration."""


class NumericalError(RuntimeError):
    """Computation failed on otherwise well-formed input."""


class ConnectivityError(NumericalError):
    """Localization graph leaves required points disconnected."""


class SparsityError(NumericalError):
    """Estimated sparsity is zero; score matrices are undefined."""


class DegenerateDesignError(NumericalError):
    """Regression design has no usable variation."""


class DegenerateInputError(NumericalError):
    """Input data carries no signal (e.g. all edge weights zero)."""
