"""
Exception hierarchy for xlab.

Every error carries the process exit code the CLI reports for it.
"""


class XlabError(Exception):
    """Base class for all xlab errors."""
    exit_code = 1


class GraphError(XlabError, ValueError):
    """Malformed graph input (loops, duplicates, out-of-range endpoints)."""
    exit_code = 2


class ParseError(XlabError, ValueError):
    """Invalid graph6 text or family expression."""
    exit_code = 2


class DomainError(XlabError):
    """A mathematical precondition does not hold (e.g. chi(H) <= 2)."""
    exit_code = 3


class BudgetError(XlabError):
    """Input exceeds a size or step budget."""
    exit_code = 4


class SpectralError(XlabError):
    """Power iteration did not reach the requested residual."""
    exit_code = 4
