"""
Exception hierarchy shared by the geometry, the referee and the strategies.
"""
from typing import Any


class GridLocalError(Exception):
    """Base class for all errors raised by the grid laboratory."""


class DomainError(GridLocalError, ValueError):
    """An argument or precondition is outside the operation's domain."""


class ProtocolError(GridLocalError):
    """The reveal/label turn order of a match was violated."""


class ConstructionError(GridLocalError):
    """An adversary construction broke one of its own invariants."""


class BudgetExhausted(GridLocalError):
    """Revealing more nodes would exceed the node budget of the match."""

    def __init__(self, spent: int, requested: int, budget: int):
        super().__init__(f"budget exhausted: spent {spent}, requested {requested}, budget {budget}")
        self.spent = spent
        self.requested = requested
        self.budget = budget


class BoostStalled(GridLocalError):
    """A boosting step did not reach its potential target although the coloring stayed proper.

    Only reachable when labels were rewritten behind the algorithm's back (oracle backdoor).
    """


class ImproperEdgeFound(GridLocalError):
    """Raised by the referee as soon as an improper edge appears; carries the certificate."""

    def __init__(self, certificate: Any):
        super().__init__(f"improper edge found: {certificate}")
        self.certificate = certificate
