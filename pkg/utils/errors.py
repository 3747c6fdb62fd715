"""Error hierarchy shared by the solvers, oracles and the CLI"""


class GreenStripError(Exception):
    """Base class for every error raised by this package"""


class DomainError(GreenStripError, ValueError):
    """Argument outside the contract of an operation"""


class PoleError(DomainError):
    """Evaluation requested at a pole of a transform"""


class AccuracyError(GreenStripError):
    """A quadrature, series or inversion did not reach its tolerance"""

    def __init__(self, message: str, estimate: float, where: str = "") -> None:
        suffix = f" at {where}" if where else ""
        super().__init__(f"{message}{suffix} (estimate {estimate:.3e})")
        self.message = message
        self.estimate = estimate
        self.where = where

    def located(self, where: str) -> "AccuracyError":
        """Same failure with the sub-term or grid location prepended"""
        inner = f"{where}, {self.where}" if self.where else where
        return AccuracyError(self.message, self.estimate, inner)


class ConfigurationError(GreenStripError):
    """Numerical settings that cannot be honoured (e.g. unstable time step)"""


class NonConvergenceError(GreenStripError):
    """Fixed-point iteration exhausted its iteration budget"""

    def __init__(self, message: str, last_increment: float, increments: list[float]) -> None:
        super().__init__(f"{message} (last increment {last_increment:.3e})")
        self.last_increment = last_increment
        self.increments = increments


class DataError(GreenStripError):
    """User supplied data produced non-finite values"""


class ScenarioError(GreenStripError):
    """Scenario file failed validation"""

    def __init__(self, key: str, message: str) -> None:
        super().__init__(f"{key}: {message}")
        self.key = key
