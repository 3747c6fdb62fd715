"""Method-of-lines reference solvers with the classical four-stage Runge-Kutta step.

The exponential memory b int_0^t e^{-beta(t-tau)} u dtau is carried as the
state v with v_t = u - beta v, v(0) = 0, and a memory source
-int_0^t e^{-(t-tau)/r} f1 dtau as w with w_t = f1 - w/r, F = -w.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from config import FD_STABILITY
from junction.params import EsjjProblem
from solvers.field import SpaceTimeField
from solvers.params import StripDomain
from solvers.problem import ProblemSpec, TimeFn, evaluate
from utils.errors import ConfigurationError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
State = tuple[FloatArray, ...]
Rhs = Callable[[float, State], State]

# Wave part of the junction equation: ht <= WAVE_CFL * hx
WAVE_CFL = 0.5


@dataclass(frozen=True)
class FdGrid:
    """Output grid nx x nt; ``substeps`` Runge-Kutta steps per output interval"""

    nx: int
    nt: int
    L: float
    T: float
    substeps: int = 1

    def __post_init__(self) -> None:
        if self.nx < 5 or self.nt < 5:
            raise ConfigurationError(f"FD grid needs nx >= 5 and nt >= 5, got {self.nx}x{self.nt}")
        if self.substeps < 1:
            raise ConfigurationError(f"substeps must be >= 1, got {self.substeps}")

    @property
    def hx(self) -> float:
        return self.L / (self.nx - 1)

    @property
    def ht(self) -> float:
        """Output spacing in time"""
        return self.T / (self.nt - 1)

    @property
    def step(self) -> float:
        """Runge-Kutta step"""
        return self.ht / self.substeps

    @classmethod
    def for_domain(
        cls,
        domain: StripDomain,
        nx: int,
        nt: int | None,
        epsilon: float,
        substeps: int | None = None,
        stability: float = FD_STABILITY,
        wave_speed: float = 0.0,
    ) -> "FdGrid":
        """Grid whose step obeys ht <= C hx^2/eps (and ht <= 0.5 hx/c for waves).

        Without ``nt`` the output grid matches the step; without ``substeps``
        the smallest stable count is chosen. Explicit values that violate the
        rule are refused.
        """
        hx = domain.L / (nx - 1)
        limit = stability * hx * hx / epsilon
        if wave_speed > 0:
            limit = min(limit, WAVE_CFL * hx / wave_speed)
        if nt is None:
            nt = max(int(math.ceil(domain.T / limit)) + 1, 5)
            substeps = substeps or 1
        ht = domain.T / (nt - 1)
        if substeps is None:
            substeps = max(int(math.ceil(ht / limit - 1e-9)), 1)
        grid = cls(nx, nt, domain.L, domain.T, substeps)
        if grid.step > limit * (1.0 + 1e-9):
            raise ConfigurationError(
                f"time step {grid.step:.3e} exceeds the stability limit {limit:.3e} "
                f"(C={stability}, hx={hx:.3e})"
            )
        return grid


def rk4_step(rhs: Rhs, t: float, y: State, h: float) -> State:
    """One classical Runge-Kutta step for a tuple of arrays"""
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, tuple(a + 0.5 * h * k for a, k in zip(y, k1, strict=True)))
    k3 = rhs(t + 0.5 * h, tuple(a + 0.5 * h * k for a, k in zip(y, k2, strict=True)))
    k4 = rhs(t + h, tuple(a + h * k for a, k in zip(y, k3, strict=True)))
    return tuple(
        a + h / 6.0 * (p + 2.0 * q + 2.0 * r + s)
        for a, p, q, r, s in zip(y, k1, k2, k3, k4, strict=True)
    )


def _march(
    rhs: Rhs, y0: State, grid: FdGrid, observe: Callable[[float, State], FloatArray]
) -> FloatArray:
    columns = np.empty((grid.nx, grid.nt))
    columns[:, 0] = observe(0.0, y0)
    y = y0
    h = grid.step
    for j in range(1, grid.nt):
        t0 = (j - 1) * grid.ht
        for k in range(grid.substeps):
            y = rk4_step(rhs, t0 + k * h, y, h)
        columns[:, j] = observe(j * grid.ht, y)
        if not np.all(np.isfinite(columns[:, j])):
            raise ConfigurationError(f"finite-difference solution blew up at t={j * grid.ht:.6g}")
    return columns


def _second_difference(u: FloatArray, hx: float) -> FloatArray:
    result: FloatArray = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (hx * hx)
    return result


def _with_edges(interior: FloatArray, left: float, right: float) -> FloatArray:
    return np.concatenate([[left], interior, [right]])


def fd_solve_integro(spec: ProblemSpec, grid: FdGrid) -> SpaceTimeField:
    """Reference solution of the strip problem, including solution-dependent sources"""
    p = spec.params
    x = np.linspace(0.0, spec.domain.L, grid.nx)
    hx = grid.hx
    if grid.step > FD_STABILITY * hx * hx / p.epsilon * (1.0 + 1e-9):
        raise ConfigurationError(
            f"time step {grid.step:.3e} violates ht <= {FD_STABILITY} hx^2/eps; raise substeps"
        )
    memory = spec.memory_source

    def edges(t: float) -> tuple[float, float]:
        ts = np.array([t])
        return float(evaluate(spec.g1, ts, what="g1")[0]), float(evaluate(spec.g2, ts, what="g2")[0])

    def full(t: float, interior: FloatArray) -> FloatArray:
        return _with_edges(interior, *edges(t))

    def rhs(t: float, y: State) -> State:
        u = full(t, y[0])
        inner = u[1:-1]
        xi = x[1:-1]
        forcing = -p.a * inner - p.b * y[1][1:-1]
        if spec.source is not None:
            forcing = forcing + evaluate(spec.source, xi, t, what="source")
        if spec.reaction is not None:
            forcing = forcing + evaluate(spec.reaction, xi, t, inner, what="reaction")
        derivs: list[FloatArray] = [p.epsilon * _second_difference(u, hx) + forcing, u - p.beta * y[1]]
        if memory is not None:
            derivs[0] = derivs[0] - y[2][1:-1]
            derivs.append(evaluate(memory.f1, x, t, u, what="memory source") - y[2] / memory.relaxation)
        return tuple(derivs)

    u0 = evaluate(spec.u0, x, what="u0")
    y0: State = (u0[1:-1].copy(), np.zeros(grid.nx))
    if memory is not None:
        y0 = y0 + (np.zeros(grid.nx),)
    logger.debug(f"fd_solve_integro: {grid.nx}x{grid.nt}, {grid.substeps} substeps")
    values = _march(rhs, y0, grid, lambda t, y: full(t, y[0]) if t > 0 else u0)
    return SpaceTimeField(values, StripDomain(grid.L, grid.T), {"source": "fd_solve_integro"})


def _first_difference(u: FloatArray, hx: float) -> FloatArray:
    """Central first difference on interior nodes, one-sided second order at both ends"""
    d = (u[2:] - u[:-2]) / (2.0 * hx)
    d[0] = (-3.0 * u[1] + 4.0 * u[2] - u[3]) / (2.0 * hx)
    d[-1] = (3.0 * u[-2] - 4.0 * u[-3] + u[-4]) / (2.0 * hx)
    return d


def fd_solve_esjj(problem: EsjjProblem, grid: FdGrid, linearize: bool = False) -> SpaceTimeField:
    """Reference solution of the junction equation for the phase.

    Reduced with psi = phi_t to
    psi_t = eps psi_xx - eps lam psi_x - alpha psi + phi_xx - lam phi_x - sin(phi) + gamma.
    ``linearize`` replaces sin(phi) by phi.
    """
    j = problem.junction
    x = np.linspace(0.0, problem.domain.L, grid.nx)
    hx = grid.hx
    limit = min(FD_STABILITY * hx * hx / j.epsilon, WAVE_CFL * hx)
    if grid.step > limit * (1.0 + 1e-9):
        raise ConfigurationError(f"time step {grid.step:.3e} exceeds the stability limit {limit:.3e}")

    def edge_values(t: float, left: TimeFn, right: TimeFn) -> tuple[float, float]:
        ts = np.array([t])
        return (
            float(evaluate(left, ts, what="boundary")[0]),
            float(evaluate(right, ts, what="boundary")[0]),
        )

    def rhs(t: float, y: State) -> State:
        phi = _with_edges(y[0], *edge_values(t, problem.h1, problem.h2))
        psi = _with_edges(y[1], *edge_values(t, problem.dh1, problem.dh2))
        inner = phi[1:-1]
        restoring = inner if linearize else np.sin(inner)
        psi_t = (
            j.epsilon * _second_difference(psi, hx)
            - j.epsilon * j.lam * _first_difference(psi, hx)
            - j.alpha * psi[1:-1]
            + _second_difference(phi, hx)
            - j.lam * _first_difference(phi, hx)
            - restoring
            + j.gamma
        )
        return (psi[1:-1], psi_t)

    phi0 = evaluate(problem.phi0, x, what="phi0")
    psi0 = evaluate(problem.phi_t0, x, what="phi_t0")
    y0: State = (phi0[1:-1].copy(), psi0[1:-1].copy())

    def observe(t: float, y: State) -> FloatArray:
        if t == 0:
            return phi0
        return _with_edges(y[0], *edge_values(t, problem.h1, problem.h2))

    logger.debug(f"fd_solve_esjj: {grid.nx}x{grid.nt}, {grid.substeps} substeps")
    values = _march(rhs, y0, grid, observe)
    return SpaceTimeField(values, StripDomain(grid.L, grid.T), {"source": "fd_solve_esjj"})
