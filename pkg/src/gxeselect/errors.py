"""Exception types shared across the package.

The CLI maps these onto exit codes, so anything user-facing should raise
one of them rather than a bare exception.
"""


class ConfigError(ValueError):
    """Invalid configuration: spline setup, hyperparameters, CLI options."""


class DataError(ValueError):
    """Malformed or inconsistent input data."""


class NumericalError(RuntimeError):
    """Numerical degeneracy (e.g. a Cholesky failure) during sampling.

    ``block`` identifies the offending coefficient block when known.
    """

    def __init__(self, message: str, block: object = None):
        super().__init__(message if block is None else f"{message} [block={block}]")
        self.block = block


class ConvergenceError(RuntimeError):
    """Convergence diagnostics failed a configured gate."""
