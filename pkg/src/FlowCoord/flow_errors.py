"""
Exception hierarchy shared by every FlowCoord module.

Graph invariant violations are reported as data (see flow_graph.validate); the
classes here are for inputs that cannot be processed at all.
"""

from typing import Any, Optional


class FlowCoordError(Exception):
    """Base class for all FlowCoord errors."""


class GraphError(FlowCoordError, ValueError):
    def __init__(self, message: str, layer: Optional[int] = None) -> None:
        super().__init__(message)
        self.layer = layer


class OptionsError(FlowCoordError, ValueError):
    pass


class InfeasibleError(FlowCoordError):
    """No feasible flow exists for the requested constraints.

    `unsatisfied` lists the network nodes that kept residual supply after the
    solve; `minimum_width` is filled in by the pipeline when a width cap was
    the likely cause.
    """

    def __init__(
        self,
        message: str,
        unsatisfied: tuple[Any, ...] = (),
        minimum_width: Optional[int] = None,
    ) -> None:
        super().__init__(message)
        self.unsatisfied = unsatisfied
        self.minimum_width = minimum_width


class OracleError(FlowCoordError):
    pass


class BudgetExceededError(OracleError):
    def __init__(self, space: int, budget: int) -> None:
        super().__init__(f"search space {space} exceeds oracle budget {budget}")
        self.space = space
        self.budget = budget


class DocumentError(FlowCoordError, ValueError):
    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"
