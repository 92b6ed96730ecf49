"""Exception types shared across the package."""


class CapacityError(ValueError):
    """An instance is too large for the dense simulator or the exact solver."""


class EdgeListError(ValueError):
    """Malformed edge-list text. ``line`` is the 1-based offending line."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class KrylovConvergenceError(RuntimeError):
    """The Lanczos propagator could not reach the requested tolerance."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual
