"""Parameters and data of the exponentially tapered junction equation.

    eps phi_xxt + phi_xx - phi_tt - eps lam phi_xt - lam phi_x - alpha phi_t = sin(phi) - gamma

With lam = 0 this is the perturbed sine-Gordon equation.
"""

import math
from dataclasses import dataclass

from solvers.params import StripDomain
from solvers.problem import SpaceFn, TimeFn, zero_space, zero_time
from utils.errors import DomainError


@dataclass(frozen=True)
class JunctionParams:
    """Surface damping eps, dissipation alpha, taper rate lam, bias gamma"""

    epsilon: float
    alpha: float
    lam: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("epsilon", "alpha", "lam", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")

    @property
    def is_sine_gordon(self) -> bool:
        """Untapered junction (lam = 0)"""
        return self.lam == 0.0


@dataclass(frozen=True)
class EsjjProblem:
    """Initial phase and velocity, Dirichlet phase data h1, h2 and their rates"""

    junction: JunctionParams
    domain: StripDomain
    phi0: SpaceFn = zero_space
    phi_t0: SpaceFn = zero_space
    h1: TimeFn = zero_time
    h2: TimeFn = zero_time
    dh1: TimeFn = zero_time
    dh2: TimeFn = zero_time
