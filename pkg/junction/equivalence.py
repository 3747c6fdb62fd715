"""Reduction of the tapered junction equation to the integro-differential strip problem.

With phi = e^{lam x/2} u and

    a = alpha + eps lam^2/4 - 1/eps,  b = lam^2/4 - a/eps,  beta = 1/eps,

a solution of

    u_t - eps u_xx + a u + b int_0^t e^{-beta(t-tau)} u dtau = F,
    F = -int_0^t e^{-(t-tau)/eps} f1 dtau,  f1 = e^{-lam x/2} (sin(e^{lam x/2} u) - gamma)

gives a phase phi solving the junction equation, provided phi_t(x, 0) is the
velocity the first-order equation implies at t = 0.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt

from junction.params import EsjjProblem, JunctionParams
from numerics.quadrature import adaptive_vector
from oracles.finite_difference import FdGrid, fd_solve_esjj, fd_solve_integro
from solvers.field import SpaceTimeField
from solvers.params import OperatorParams, StripDomain
from solvers.problem import MemorySource, ProblemSpec, SpaceFn, TimeFn, evaluate, zero_time
from utils.csv_io import write_csv
from utils.errors import DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
FieldFn = Callable[[FloatArray, FloatArray], FloatArray]


@dataclass(frozen=True)
class MappedParams:
    """Operator coefficients of a junction and whether the kernel formula applies"""

    params: OperatorParams
    admissible: bool


def map_params(j: JunctionParams) -> MappedParams:
    eps = j.epsilon
    a = j.alpha + eps * j.lam**2 / 4.0 - 1.0 / eps
    b = j.lam**2 / 4.0 - a / eps
    params = OperatorParams(epsilon=eps, a=a, b=b, beta=1.0 / eps)
    return MappedParams(params, params.kernel_admissible)


def gauge_forward(u_field: SpaceTimeField, lam: float) -> SpaceTimeField:
    """phi = e^{lam x/2} u at every node"""
    weight = np.exp(0.5 * lam * u_field.x)[:, np.newaxis]
    origin = u_field.metadata.get("source", "")
    return u_field.with_values(weight * u_field.values, f"gauge_forward({origin})")


def gauge_backward(phi_field: SpaceTimeField, lam: float) -> SpaceTimeField:
    """u = e^{-lam x/2} phi at every node"""
    weight = np.exp(-0.5 * lam * phi_field.x)[:, np.newaxis]
    origin = phi_field.metadata.get("source", "")
    return phi_field.with_values(weight * phi_field.values, f"gauge_backward({origin})")


def f1_eval(u_bar: float | FloatArray, x: float | FloatArray, j: JunctionParams) -> FloatArray:
    """e^{-lam x/2} (sin(e^{lam x/2} u) - gamma)"""
    grow = np.exp(0.5 * j.lam * np.asarray(x, dtype=np.float64))
    result: FloatArray = (np.sin(grow * np.asarray(u_bar, dtype=np.float64)) - j.gamma) / grow
    return result


def junction_memory(j: JunctionParams) -> MemorySource:
    """The memory source of the reduced problem"""
    return MemorySource(f1=lambda x, t, u: f1_eval(u, x, j), relaxation=j.epsilon)


def consistent_initial_velocity(
    u0: SpaceFn,
    p: OperatorParams,
    u0_xx: SpaceFn | None = None,
    h: float = 1e-3,
) -> SpaceFn:
    """x -> eps u0''(x) - a u0(x), the value of u_t at t = 0 (the memory source vanishes there).

    Without ``u0_xx`` the second derivative is taken by fourth-order central
    differences of step h.
    """
    if u0_xx is not None:
        second = u0_xx
    else:
        logger.warning(f"no analytic u0'' supplied; using fourth-order differences with h={h}")

        def second(x: FloatArray) -> FloatArray:
            x = np.asarray(x, dtype=np.float64)
            result: FloatArray = (
                -u0(x + 2 * h) + 16.0 * u0(x + h) - 30.0 * u0(x) + 16.0 * u0(x - h) - u0(x - 2 * h)
            ) / (12.0 * h * h)
            return result

    def velocity(x: FloatArray) -> FloatArray:
        x = np.asarray(x, dtype=np.float64)
        result: FloatArray = p.epsilon * second(x) - p.a * u0(x)
        return result

    return velocity


def residual_esjj(phi_field: SpaceTimeField, j: JunctionParams, t_min: float = 0.0) -> float:
    """Sup over interior nodes with t >= t_min of the junction-equation residual.

    Every derivative uses second-order central stencils; phi_xxt is the central
    time difference of the central second difference in x.
    """
    if phi_field.nx < 5 or phi_field.nt < 5:
        raise DomainError(f"residual needs nx, nt >= 5, got {phi_field.nx}x{phi_field.nt}")
    phi = phi_field.values
    hx, ht = phi_field.hx, phi_field.ht
    xx = (phi[2:, :] - 2.0 * phi[1:-1, :] + phi[:-2, :]) / (hx * hx)
    dx = (phi[2:, :] - phi[:-2, :]) / (2.0 * hx)
    centre = phi[1:-1, 1:-1]
    phi_xx = xx[:, 1:-1]
    phi_xxt = (xx[:, 2:] - xx[:, :-2]) / (2.0 * ht)
    phi_x = dx[:, 1:-1]
    phi_xt = (dx[:, 2:] - dx[:, :-2]) / (2.0 * ht)
    phi_t = (phi[1:-1, 2:] - phi[1:-1, :-2]) / (2.0 * ht)
    phi_tt = (phi[1:-1, 2:] - 2.0 * centre + phi[1:-1, :-2]) / (ht * ht)
    residual = (
        j.epsilon * phi_xxt + phi_xx - phi_tt - j.epsilon * j.lam * phi_xt
        - j.lam * phi_x - j.alpha * phi_t - np.sin(centre) + j.gamma
    )
    keep = phi_field.t[1:-1] >= t_min
    if not np.any(keep):
        raise DomainError(f"no interior time layer at or after t_min={t_min}")
    return float(np.max(np.abs(residual[:, keep])))


@dataclass(frozen=True)
class TrialField:
    """Test function u(x, t) with its source F(x, t) (None for F = 0)"""

    name: str
    u: FieldFn
    source: FieldFn | None = None


@dataclass
class IdentityReport:
    """|(d/dt + beta)(L u) + Q u - f1| per trial, f1 = -(F_t + F/eps)"""

    discrepancies: dict[str, float] = field(default_factory=dict)

    @property
    def max_discrepancy(self) -> float:
        return max(self.discrepancies.values(), default=0.0)


def _memory(u: FieldFn, beta: float, x: FloatArray, t: float) -> FloatArray:
    """int_0^t e^{-beta(t-tau)} u(x, tau) dtau"""
    if t <= 0:
        return np.zeros_like(x)
    value, _ = adaptive_vector(
        lambda tau: math.exp(-beta * (t - tau)) * u(x, np.full_like(x, tau)), 0.0, t, tol=1e-13,
        where="trial memory",
    )
    return value


def verify_operator_identity(
    p: OperatorParams,
    j: JunctionParams,
    trials: Sequence[TrialField],
    x: FloatArray | None = None,
    t: float = 0.7,
    h: float = 1e-3,
) -> IdentityReport:
    """Check (d/dt + beta) L u = -Q u + f1 with finite differences of step h.

    L u = u_t - eps u_xx + a u + b int e^{-beta(t-tau)} u dtau - F and
    Q u = eps u_xxt + u_xx - u_tt - (alpha + eps lam^2/4) u_t - lam^2/4 u.
    """
    mapped = map_params(j).params
    if not np.allclose(
        [mapped.epsilon, mapped.a, mapped.b, mapped.beta], [p.epsilon, p.a, p.b, p.beta], rtol=1e-12
    ):
        raise DomainError("operator parameters are not the image of the junction parameters")
    xs = np.asarray(x if x is not None else np.linspace(0.2, 0.8, 4), dtype=np.float64)
    report = IdentityReport()
    for trial in trials:
        u = trial.u
        source = trial.source

        def at(tt: float, fn: FieldFn = u) -> FloatArray:
            return fn(xs, np.full_like(xs, tt))

        def u_xx(tt: float, fn: FieldFn = u) -> FloatArray:
            full = np.full_like(xs, tt)
            result: FloatArray = (fn(xs + h, full) - 2.0 * fn(xs, full) + fn(xs - h, full)) / (h * h)
            return result

        def forcing(tt: float, src: FieldFn | None = source) -> FloatArray:
            return at(tt, src) if src is not None else np.zeros_like(xs)

        def operator(tt: float) -> FloatArray:
            u_t = (at(tt + h) - at(tt - h)) / (2.0 * h)
            return (
                u_t - p.epsilon * u_xx(tt) + p.a * at(tt) + p.b * _memory(u, p.beta, xs, tt)
                - forcing(tt)
            )

        lhs = (operator(t + h) - operator(t - h)) / (2.0 * h) + p.beta * operator(t)
        u_t = (at(t + h) - at(t - h)) / (2.0 * h)
        u_tt = (at(t + h) - 2.0 * at(t) + at(t - h)) / (h * h)
        u_xxt = (u_xx(t + h) - u_xx(t - h)) / (2.0 * h)
        damping = j.alpha + j.epsilon * j.lam**2 / 4.0
        q = j.epsilon * u_xxt + u_xx(t) - u_tt - damping * u_t - j.lam**2 / 4.0 * at(t)
        f_t = (forcing(t + h) - forcing(t - h)) / (2.0 * h)
        f1 = -(f_t + forcing(t) / j.epsilon)
        report.discrepancies[trial.name] = float(np.max(np.abs(lhs + q - f1)))
    logger.info(f"operator identity: max discrepancy {report.max_discrepancy:.3e}")
    return report


@dataclass(frozen=True)
class EquivalenceCase:
    """A junction problem: initial phase, phase boundary data and their time derivatives.

    With both ``phi0_x`` and ``phi0_xx`` the consistent initial velocity is
    exact; otherwise it falls back to finite differences.
    """

    junction: JunctionParams
    domain: StripDomain
    phi0: SpaceFn
    phi0_x: SpaceFn | None = None
    phi0_xx: SpaceFn | None = None
    h1: TimeFn = zero_time
    h2: TimeFn = zero_time
    dh1: TimeFn = zero_time
    dh2: TimeFn = zero_time

    def reduced_problem(self) -> ProblemSpec:
        """The integro-differential problem for u = e^{-lam x/2} phi"""
        j = self.junction
        lam = j.lam
        L = self.domain.L
        p = map_params(j).params
        phi0 = self.phi0

        def u0(x: FloatArray) -> FloatArray:
            return np.exp(-0.5 * lam * x) * phi0(x)

        h2 = self.h2
        right_weight = math.exp(-0.5 * lam * L)

        def g2(t: FloatArray) -> FloatArray:
            result: FloatArray = right_weight * evaluate(h2, t, what="h2")
            return result

        return ProblemSpec(
            domain=self.domain,
            params=p,
            u0=u0,
            g1=self.h1,
            g2=zero_time if h2 is zero_time else g2,
            memory_source=junction_memory(j),
        )

    def initial_velocity(self) -> SpaceFn:
        """phi_t(x, 0) consistent with the reduced problem"""
        lam = self.junction.lam
        spec = self.reduced_problem()
        u0_xx: SpaceFn | None = None
        if self.phi0_x is not None and self.phi0_xx is not None:
            phi0, phi0_x, phi0_xx = self.phi0, self.phi0_x, self.phi0_xx

            def u0_xx(x: FloatArray) -> FloatArray:
                result: FloatArray = np.exp(-0.5 * lam * x) * (
                    phi0_xx(x) - lam * phi0_x(x) + 0.25 * lam * lam * phi0(x)
                )
                return result

        velocity = consistent_initial_velocity(spec.u0, spec.params, u0_xx)

        def phi_t0(x: FloatArray) -> FloatArray:
            result: FloatArray = np.exp(0.5 * lam * x) * velocity(x)
            return result

        return phi_t0

    def junction_problem(self) -> EsjjProblem:
        return EsjjProblem(
            junction=self.junction,
            domain=self.domain,
            phi0=self.phi0,
            phi_t0=self.initial_velocity(),
            h1=self.h1,
            h2=self.h2,
            dh1=self.dh1,
            dh2=self.dh2,
        )


@dataclass(frozen=True)
class EquivalenceLevel:
    nx: int
    nt: int
    residual: float
    observed_order: float | None
    fd_distance: float | None


@dataclass
class EquivalenceReport:
    """Residual of the transformed solution under simultaneous refinement"""

    levels: list[EquivalenceLevel] = field(default_factory=list)

    @property
    def orders(self) -> list[float]:
        return [lvl.observed_order for lvl in self.levels if lvl.observed_order is not None]

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            ("grid", "residual", "observed_order"),
            (
                (f"{lvl.nx}x{lvl.nt}", lvl.residual,
                 lvl.observed_order if lvl.observed_order is not None else float("nan"))
                for lvl in self.levels
            ),
        )


def equivalence_study(
    case: EquivalenceCase,
    levels: Sequence[int],
    time_ratio: float = 1.0,
    t_min: float = 0.0,
    compare_fd: bool = True,
) -> EquivalenceReport:
    """Solve the reduced problem on each grid, gauge it back and measure the residual.

    Output grids keep ht = time_ratio * hx so both directions refine together.
    With ``compare_fd`` the junction equation is also solved directly and the
    sup distance to the transformed solution is recorded.
    """
    if len(levels) < 1:
        raise DomainError("equivalence study needs at least one grid")
    j = case.junction
    spec = case.reduced_problem()
    report = EquivalenceReport()
    previous: float | None = None
    for nx in levels:
        hx = case.domain.L / (nx - 1)
        nt = int(round(case.domain.T / (time_ratio * hx))) + 1
        grid = FdGrid.for_domain(case.domain, nx, nt, j.epsilon)
        u_bar = fd_solve_integro(spec, grid)
        phi = gauge_forward(u_bar, j.lam)
        residual = residual_esjj(phi, j, t_min)
        order = math.log2(previous / residual) if previous is not None and residual > 0 else None
        distance = None
        if compare_fd:
            direct_grid = FdGrid.for_domain(case.domain, nx, nt, j.epsilon, wave_speed=1.0)
            direct = fd_solve_esjj(case.junction_problem(), direct_grid)
            distance = direct.sup_distance(phi)
        report.levels.append(EquivalenceLevel(nx, nt, residual, order, distance))
        logger.info(f"equivalence {nx}x{nt}: residual {residual:.3e}, order {order}, fd distance {distance}")
        previous = residual
    return report
