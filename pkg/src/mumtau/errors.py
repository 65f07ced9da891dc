"""Exception hierarchy shared by all modules.

``InputError`` marks problems with user-supplied data (CLI exit code 2),
``NumericError`` marks exhausted precision or failed convergence (exit
code 3).  Verification *failures* (an identity missing its tolerance, a
residual above threshold) are reported, not raised.
"""


class MumTauError(Exception):
    """Base class for all package errors."""


class InputError(MumTauError):
    """Invalid operator, job description, or argument."""


class ChartMismatchError(InputError):
    """Two objects live in different charts of the variable."""


class NotMumError(InputError):
    """The indicial polynomial is not a single repeated rational root."""


class NumericError(MumTauError):
    """Precision exhausted, or an iteration failed to converge."""
