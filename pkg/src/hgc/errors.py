"""Exception types shared across the package."""


class DimensionError(ValueError):
    """A matrix shape or size argument is out of its valid range."""


class DomainError(ValueError):
    """A calculator argument lies outside its stated domain."""


class DegeneracyError(ArithmeticError):
    """Gram-Schmidt hit a numerically dependent column.

    This has probability zero for Gaussian input, so it signals input
    misuse or numerical collapse rather than a value to propagate.
    """

    def __init__(self, column: int, residual: float, threshold: float):
        self.column = column
        self.residual = residual
        self.threshold = threshold
        super().__init__(
            f"column {column} (1-based) is numerically dependent on its "
            f"predecessors: residual norm {residual:.3e} below threshold "
            f"{threshold:.3e}"
        )


class ConfigError(ValueError):
    """An experiment configuration violates its invariants."""


class NumericalError(RuntimeError):
    """A trial failed numerically; carries the trial index."""

    def __init__(self, trial: int, cause: Exception):
        self.trial = trial
        self.cause = cause
        super().__init__(f"trial {trial}: {cause}")
