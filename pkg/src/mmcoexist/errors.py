"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    pass


class ConfigError(ValueError):
    """Bad scenario configuration: unknown key or a violated bound."""


class DegenerateStreamError(ArithmeticError):
    """A precoder stream has zero composite norm and cannot be normalized."""

    def __init__(self, stream, message=None):
        self.stream = stream
        super().__init__(message or f"stream {stream} has an all-zero composite precoder column")


class DegenerateCombinerError(ArithmeticError):
    """The post-combiner noise-plus-interference covariance is singular."""


class TrialError(RuntimeError):
    """Wraps a failure inside one Monte Carlo trial, carrying its seed."""

    def __init__(self, seed, cause):
        self.seed = seed
        self.cause = cause
        super().__init__(f"trial with seed {seed} failed: {cause}")
