"""Exception hierarchy shared by the simulation, diagnostics and CLI layers."""


class MonotoneMarkovError(Exception):
    """Root of every error raised by this package."""


class EmptySampleError(MonotoneMarkovError, ValueError):
    def __init__(self, message: str = "empty sample"):
        super().__init__(message)


class NonFiniteSampleError(MonotoneMarkovError, ValueError):
    def __init__(self, message: str = "non-finite sample"):
        super().__init__(message)


class NonFiniteStateError(MonotoneMarkovError, ArithmeticError):
    """A kernel or jump map produced NaN or an infinity.

    Args:
        index (int): step index (kernels) or jump index (PDMP paths) that failed.
    """

    def __init__(self, index: int, where: str = "step"):
        self.index = index
        self.where = where
        super().__init__(f"non-finite state produced at {where} {index}")


class ConfigurationError(MonotoneMarkovError, ValueError):
    pass


class OutOfHorizonError(MonotoneMarkovError, IndexError):
    pass


class UnsupportedConfigurationError(MonotoneMarkovError, ValueError):
    pass


class ModelError(MonotoneMarkovError, ArithmeticError):
    pass


class LogOddsDomainError(MonotoneMarkovError, ValueError):
    pass


class InsufficientTailDataError(MonotoneMarkovError, ValueError):
    pass
