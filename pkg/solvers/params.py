"""Parameter and numerics types shared by the solvers"""

import math
from dataclasses import dataclass, field

from config import MAX_ITER, PANEL_ORDER, PICARD_TOL, QUAD_TOL, SERIES_TOL
from utils.errors import DomainError


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise DomainError(message)


@dataclass(frozen=True)
class OperatorParams:
    """Coefficients of u_t - eps u_xx + a u + b int_0^t e^{-beta(t-tau)} u dtau = F"""

    epsilon: float
    a: float
    b: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("epsilon", "a", "b", "beta"):
            _require(math.isfinite(getattr(self, name)), f"{name} must be finite")
        _require(self.epsilon > 0, f"epsilon must be > 0, got {self.epsilon}")
        _require(self.beta > 0, f"beta must be > 0, got {self.beta}")

    @property
    def abscissa(self) -> float:
        """Abscissa of absolute convergence of the kernel transform"""
        return max(-self.a, -self.beta)

    @property
    def kernel_admissible(self) -> bool:
        """Whether the direct kernel formula applies (a, b non-negative)"""
        return self.a >= 0 and self.b >= 0

    def require_kernel_admissible(self) -> None:
        """Raise unless the direct kernel formula applies"""
        _require(
            self.kernel_admissible,
            f"kernel path needs a >= 0 and b >= 0, got a={self.a}, b={self.b}; "
            "use the finite-difference or eigenmode oracles",
        )


@dataclass(frozen=True)
class StripDomain:
    """The strip 0 <= x <= L over 0 < t <= T"""

    L: float
    T: float

    def __post_init__(self) -> None:
        _require(self.L > 0 and math.isfinite(self.L), f"L must be > 0, got {self.L}")
        _require(self.T > 0 and math.isfinite(self.T), f"T must be > 0, got {self.T}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances of the adaptive integrals inside the kernel"""

    tol: float = QUAD_TOL
    rel_tol: float = 0.0
    limit: int = 200

    def __post_init__(self) -> None:
        _require(self.tol > 0, f"quadrature tol must be > 0, got {self.tol}")
        _require(self.rel_tol >= 0, f"quadrature rel_tol must be >= 0, got {self.rel_tol}")
        _require(self.limit >= 1, f"quadrature limit must be >= 1, got {self.limit}")


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation policy of the image sum defining theta"""

    tol: float = SERIES_TOL
    max_terms: int = 400
    settle_count: int = 2

    def __post_init__(self) -> None:
        _require(self.tol > 0, f"series tol must be > 0, got {self.tol}")
        _require(self.max_terms >= 1, f"max_terms must be >= 1, got {self.max_terms}")
        _require(self.settle_count >= 2, f"settle_count must be >= 2, got {self.settle_count}")


@dataclass(frozen=True)
class PicardConfig:
    """Fixed-point iteration settings; ``window`` is a time length"""

    tol: float = PICARD_TOL
    max_iter: int = MAX_ITER
    window: float = math.inf
    adaptive_window: bool = True

    def __post_init__(self) -> None:
        _require(self.tol > 0, f"picard tol must be > 0, got {self.tol}")
        _require(self.max_iter >= 1, f"max_iter must be >= 1, got {self.max_iter}")
        _require(self.window > 0, f"window must be > 0, got {self.window}")


@dataclass(frozen=True)
class NumericsConfig:
    """Everything the Green-function solver needs to know about accuracy.

    ``panel_tol`` is the absolute tolerance of the composite rules used for
    the x- and time-convolutions of the solution formula.
    """

    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    series: SeriesConfig = field(default_factory=SeriesConfig)
    picard: PicardConfig = field(default_factory=PicardConfig)
    panel_tol: float = 1e-8
    panel_order: int = PANEL_ORDER
    max_levels: int = 6
    workers: int = 1

    def __post_init__(self) -> None:
        _require(self.panel_tol > 0, f"panel_tol must be > 0, got {self.panel_tol}")
        _require(self.panel_order >= 2, f"panel_order must be >= 2, got {self.panel_order}")
        _require(self.max_levels >= 1, f"max_levels must be >= 1, got {self.max_levels}")
        _require(self.workers >= 1, f"workers must be >= 1, got {self.workers}")
