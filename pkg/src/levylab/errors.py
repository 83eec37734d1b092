"""Exception types shared across the package.

The CLI maps these onto process exit codes (config 2, threshold 3,
blowup 4); library code raises them directly.
"""


class InputError(ValueError):
    """Malformed argument or spec (non-monotone grid, bad support, ...)."""


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries the key path."""


class ThresholdError(ValueError):
    """A smallness condition on the Lipschitz constant is violated."""


class NumericalBlowupError(RuntimeError):
    """Integration produced non-finite values."""

    def __init__(self, time: float, message: str = ""):
        self.time = time
        super().__init__(message or f"non-finite state at t = {time:g}")


class HorizonError(ValueError):
    """Evaluation horizon too small to bracket the metric fixed point."""


class InfeasibleError(ValueError):
    """No admissible point in a constrained search (empty grid)."""
