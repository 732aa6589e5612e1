"""Exception hierarchy shared by all singspec modules.

Each error carries a ``category`` string and an ``exit_code`` used by the CLI.
"""

from __future__ import annotations


class SingspecError(Exception):
    category = "internal"
    exit_code = 1


class DomainError(SingspecError, ValueError):
    """Argument outside the mathematical domain of a special function."""

    category = "domain"
    exit_code = 3


class ParseError(SingspecError, ValueError):
    """Descriptor text does not match the grammar."""

    category = "parse"
    exit_code = 2

    def __init__(self, message: str, offset: int, expected: frozenset[str] | set[str] = frozenset()):
        self.offset = int(offset)
        self.expected = frozenset(expected)
        exp = ",".join(sorted(self.expected))
        super().__init__(f"{message} at offset {self.offset}" + (f" (expected one of: {exp})" if exp else ""))


class HypothesisViolated(SingspecError, ValueError):
    """A rate theorem or membership condition does not hold for the input."""

    category = "hypothesis"
    exit_code = 3

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"hypothesis violated: {condition}" + (f" ({detail})" if detail else ""))


class NotInL2w(HypothesisViolated):
    pass


class NotInSobolev(HypothesisViolated):
    pass


class BasisMismatch(SingspecError, ValueError):
    category = "hypothesis"
    exit_code = 3


class LengthError(SingspecError, ValueError):
    category = "hypothesis"
    exit_code = 3


class NoConvergence(SingspecError, ArithmeticError):
    """Quadrature error estimate exceeded the tolerance at maximum refinement."""

    category = "convergence"
    exit_code = 4

    def __init__(self, value, err_est, tol, message: str = "quadrature did not converge"):
        self.value = value
        self.err_est = err_est
        self.tol = tol
        super().__init__(f"{message}: value={value!r} err_est={err_est!r} tol={tol!r}")


class TailDominates(SingspecError, ArithmeticError):
    """Extrapolated unstored tail is too large compared to the stored tail."""

    category = "convergence"
    exit_code = 4


class InsufficientData(SingspecError, ValueError):
    category = "convergence"
    exit_code = 4
