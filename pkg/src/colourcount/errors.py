"""Error taxonomy shared across the package.

Four situations are kept apart on purpose: bad input, a quantity that is
mathematically undefined for the instance, a violated precondition of a bound,
and an exhausted resource budget.  Callers (CLI, service) map them to distinct
exit codes / HTTP statuses.
"""
from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ToolkitError, ValueError):
    """Malformed arguments, files or payloads."""


class DomainError(ToolkitError, ValueError):
    """A requested quantity is undefined for this instance (e.g. the geometric
    mean degree of a graph with an isolated vertex, or Lambert W of z < 0)."""


class HypothesisError(ToolkitError, ValueError):
    """A precondition of a bound is violated (e.g. rho <= 1 where ln rho is
    needed, or rho < 6 for the q(v)-based parameters)."""


class CapacityError(ToolkitError, RuntimeError):
    """A configured budget (search nodes, subset-DP size, enumeration cap,
    memory estimate) would be exceeded.  Never a silent truncation."""

    def __init__(self, message: str, *, budget: int | None = None, needed: int | None = None):
        super().__init__(message)
        self.budget = budget
        self.needed = needed


class GenerationError(ToolkitError, RuntimeError):
    """A randomized generator exhausted its attempt budget."""


class UncolourableError(ToolkitError, ValueError):
    """Sampling was requested from an empty set of proper colourings."""

    def __init__(self, message: str = "instance admits no proper colouring"):
        super().__init__(message)
        self.count = 0
