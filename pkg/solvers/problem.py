"""Data of the Dirichlet problem on the strip.

All callables are vectorized: positions and times arrive as numpy arrays
that broadcast against each other, and values must come back with the
broadcast shape.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from solvers.params import OperatorParams, StripDomain
from utils.errors import DataError, DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
SpaceFn = Callable[[FloatArray], FloatArray]
TimeFn = Callable[[FloatArray], FloatArray]
SourceFn = Callable[[FloatArray, FloatArray], FloatArray]
ReactionFn = Callable[[FloatArray, FloatArray, FloatArray], FloatArray]

# Corner mismatches below this are rounding, not incompatibility
COMPATIBILITY_TOL = 1e-8


def zero_space(x: FloatArray) -> FloatArray:
    return np.zeros_like(np.asarray(x, dtype=np.float64))


def zero_time(t: FloatArray) -> FloatArray:
    return np.zeros_like(np.asarray(t, dtype=np.float64))


def evaluate(fn: Callable[..., FloatArray], *args: FloatArray | float, what: str) -> FloatArray:
    """Call a data function, broadcast its result and reject non-finite values"""
    arrays = np.broadcast_arrays(*(np.asarray(a, dtype=np.float64) for a in args))
    values = np.broadcast_to(np.asarray(fn(*arrays), dtype=np.float64), arrays[0].shape)
    if not np.all(np.isfinite(values)):
        raise DataError(f"{what} returned non-finite values")
    return values


@dataclass(frozen=True)
class MemorySource:
    """F(x,t) = -int_0^t e^{-(t-tau)/relaxation} f1(x, tau, u(x,tau)) dtau"""

    f1: ReactionFn
    relaxation: float

    def __post_init__(self) -> None:
        if not self.relaxation > 0:
            raise DomainError(f"relaxation must be > 0, got {self.relaxation}")


@dataclass(frozen=True)
class ProblemSpec:
    """u_t - eps u_xx + a u + b int_0^t e^{-beta(t-tau)} u dtau = F on the strip.

    F is the sum of ``source(x,t)``, ``reaction(x,t,u)`` and the memory
    source; u(0,t) = g1(t), u(L,t) = g2(t), u(x,0) = u0(x). ``boundary_support``
    is a time after which g1 and g2 vanish, when known.
    """

    domain: StripDomain
    params: OperatorParams
    u0: SpaceFn = zero_space
    g1: TimeFn = zero_time
    g2: TimeFn = zero_time
    source: SourceFn | None = None
    reaction: ReactionFn | None = None
    memory_source: MemorySource | None = None
    boundary_support: float | None = None

    def __post_init__(self) -> None:
        if self.boundary_support is not None and not self.boundary_support > 0:
            raise DomainError(f"boundary_support must be > 0, got {self.boundary_support}")

    @property
    def is_linear(self) -> bool:
        return self.reaction is None and self.memory_source is None

    def corner_mismatch(self) -> tuple[float, float]:
        """|u0(0) - g1(0+)| and |u0(L) - g2(0+)|"""
        ends = evaluate(self.u0, np.array([0.0, self.domain.L]), what="u0")
        starts = np.array([
            evaluate(self.g1, np.array([0.0]), what="g1")[0],
            evaluate(self.g2, np.array([0.0]), what="g2")[0],
        ])
        left, right = np.abs(ends - starts)
        return float(left), float(right)

    def is_compatible(self) -> bool:
        """Whether the data are continuous at the corners; warns when not"""
        left, right = self.corner_mismatch()
        if max(left, right) > COMPATIBILITY_TOL:
            logger.warning(
                f"initial and boundary data disagree at the corners "
                f"(x=0: {left:.3e}, x=L: {right:.3e}); attainment is not expected there"
            )
            return False
        return True
