"""Exception types shared across the package."""


class CliqueChromError(Exception):
    """Base class for all package errors."""


class GraphFormatError(CliqueChromError, ValueError):
    """Malformed edge-list or coloring text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceeded(CliqueChromError):
    """Maximal-clique enumeration found more cliques than allowed."""

    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"more than {cap} maximal cliques")


class BudgetExceeded(CliqueChromError):
    """Exact search ran out of nodes before proving optimality.

    ``upper_bound`` and ``certificate`` hold the best valid coloring found so
    far; ``proven`` is always False.
    """

    def __init__(self, upper_bound, certificate, lower_bound=None):
        self.upper_bound = upper_bound
        self.certificate = certificate
        self.lower_bound = lower_bound
        self.proven = False
        super().__init__(
            f"node budget exhausted (best known upper bound {upper_bound}, "
            f"lower bound {lower_bound})"
        )


class InapplicableRegime(CliqueChromError):
    """Parameters fall outside the regime a construction needs."""


class NoValidK(CliqueChromError):
    """No clique size k in the scanned range satisfies the lower-bound assumptions."""
