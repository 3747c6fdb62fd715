"""Runners for the scenario kinds built on the junction block"""

import math

import numpy as np
import numpy.typing as npt

from junction.equivalence import EquivalenceCase, equivalence_study, residual_esjj
from junction.params import EsjjProblem, JunctionParams
from oracles.finite_difference import FdGrid, fd_solve_esjj
from runners.artifacts import write_plot_stub
from runners.base import BaseRunner, Check, RunOutcome
from runners.profiles import Profile
from solvers.problem import TimeFn, zero_space
from utils.errors import ScenarioError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]

# Observed residual order accepted as second order
ORDER_RANGE = (1.8, 2.2)
# Sup distance between the direct and the transformed phase on the finest grid
FD_AGREEMENT = 5e-3
_RATE_STEP = 1e-6


def _junction(runner: BaseRunner) -> JunctionParams:
    if runner.scenario.junction is None:
        raise ScenarioError("junction", f"kind {runner.kind} needs the junction block")
    return runner.scenario.junction


def _rate(profile: Profile, T: float) -> TimeFn:
    """Time derivative of boundary data, by central differences when no closed form exists"""
    exact = profile.derivative(T, 1)
    if exact is not None:
        return exact
    logger.warning(f"no closed-form rate for {profile.kind} boundary data; differencing")
    shape = profile.time(T)

    def rate(t: FloatArray) -> FloatArray:
        t = np.asarray(t, dtype=np.float64)
        result: FloatArray = (shape(t + _RATE_STEP) - shape(t - _RATE_STEP)) / (2.0 * _RATE_STEP)
        return result

    return rate


class SolveEsjjRunner(BaseRunner):
    """Direct finite-difference solution of the junction equation, starting at rest"""

    kind = "solve-esjj"

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        j = _junction(self)
        L, T = sc.domain.L, sc.domain.T
        g1, g2 = sc.data["g1"], sc.data["g2"]
        problem = EsjjProblem(
            junction=j,
            domain=sc.domain,
            phi0=sc.data["u0"].space(L),
            phi_t0=zero_space,
            h1=g1.time(T),
            h2=g2.time(T),
            dh1=_rate(g1, T),
            dh2=_rate(g2, T),
        )
        grid = FdGrid.for_domain(sc.domain, sc.nx, sc.nt, j.epsilon, wave_speed=1.0)
        field = fd_solve_esjj(problem, grid)
        field.to_csv(self.artifact(outcome, "field.csv"))
        write_plot_stub(self.out_dir)
        outcome.artifacts.append("plot_field.py")
        residual = residual_esjj(field, j, sc.t_min)
        outcome.achieved["esjj.residual"] = residual
        outcome.checks.append(Check(
            "phase computed", True, f"{grid.substeps} substeps per output interval"
        ))


class EquivalenceRunner(BaseRunner):
    """Residual of the gauge-transformed integro-differential solution under refinement"""

    kind = "equivalence-check"

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        j = _junction(self)
        L, T = sc.domain.L, sc.domain.T
        u0, g1, g2 = sc.data["u0"], sc.data["g1"], sc.data["g2"]
        case = EquivalenceCase(
            junction=j,
            domain=sc.domain,
            phi0=u0.space(L),
            phi0_x=u0.derivative(L, 1),
            phi0_xx=u0.derivative(L, 2),
            h1=g1.time(T),
            h2=g2.time(T),
            dh1=_rate(g1, T),
            dh2=_rate(g2, T),
        )
        # the coarsest grid has sc.nt time nodes; finer grids keep ht / hx fixed
        time_ratio = (T / (sc.nt - 1)) / (L / (sc.levels[0] - 1))
        report = equivalence_study(case, sc.levels, time_ratio, sc.t_min, compare_fd=True)
        report.to_csv(self.artifact(outcome, "report.csv"))
        finest = report.levels[-1]
        outcome.achieved["esjj.residual"] = finest.residual
        orders = report.orders
        if orders:
            low, high = ORDER_RANGE
            outcome.checks.append(Check(
                "observed order",
                all(low <= order <= high for order in orders),
                ", ".join(f"{order:.3f}" for order in orders),
            ))
        distance = finest.fd_distance if finest.fd_distance is not None else math.inf
        outcome.requested["esjj.fd_distance"] = FD_AGREEMENT
        outcome.achieved["esjj.fd_distance"] = distance
        outcome.checks.append(Check(
            "direct solution agrees", distance <= FD_AGREEMENT, f"sup distance {distance:.3e}"
        ))
