"""Runners for the scenario kinds built on the operator block"""

import math
from dataclasses import replace

import numpy as np
import numpy.typing as npt

from oracles.eigenmode import eigenmode_field
from runners.artifacts import write_plot_stub
from runners.base import BaseRunner, Check, RunOutcome
from solvers.green import decay_study, solve_linear_dirichlet
from solvers.kernel import DEFAULT_VARIANT, validate_kernel_laplace
from solvers.nonlinear import picard_residual, picard_solve
from solvers.params import OperatorParams
from utils.errors import ScenarioError

FloatArray = npt.NDArray[np.float64]

# Relative agreement required between the numerical and closed-form kernel transform
KERNEL_TOL = 1e-4
# Sup-norm agreement required with the separable solution
EIGENMODE_TOL = 1e-4
# Successive Picard increments must shrink at least by this ratio
CONTRACTION_RATIO = 0.9
# Relative agreement of the decay rate fitted to the long finite-difference run
FD_RATE_TOL = 0.05


def _operator(runner: BaseRunner) -> OperatorParams:
    if runner.scenario.operator is None:
        raise ScenarioError("operator", f"kind {runner.kind} needs the operator block")
    return runner.scenario.operator


class KernelValidateRunner(BaseRunner):
    """Numerical Laplace transform of K against its closed form"""

    kind = "kernel-validate"

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        p = _operator(self)
        report = validate_kernel_laplace(
            list(sc.r_set), list(sc.s_set), p, sc.numerics.quadrature, DEFAULT_VARIANT, KERNEL_TOL
        )
        report.to_csv(self.artifact(outcome, "report.csv"))
        outcome.achieved["numerics.quad_tol"] = None
        outcome.requested["kernel.rel_err"] = KERNEL_TOL
        outcome.achieved["kernel.rel_err"] = report.max_rel_error
        outcome.checks.append(Check(
            f"closed-form transform ({report.variant.value})",
            report.passed(KERNEL_TOL),
            f"max rel error {report.max_rel_error:.3e}",
        ))
        outcome.checks.append(Check("tail bound conclusive", not report.inconclusive))


class SolveLinearRunner(BaseRunner):
    """Green-function solution of the linear problem on the output grid"""

    kind = "solve-linear"

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        p = _operator(self)
        spec = sc.problem()
        field = solve_linear_dirichlet(spec, sc.nx, sc.nt, sc.numerics)
        field.to_csv(self.artifact(outcome, "field.csv"))
        write_plot_stub(self.out_dir)
        outcome.artifacts.append("plot_field.py")
        outcome.achieved["numerics.quad_tol"] = None
        outcome.achieved["numerics.series_tol"] = None
        left, right = spec.corner_mismatch()
        outcome.checks.append(Check(
            "field assembled", True, f"{field.nx}x{field.nt} nodes, corner mismatch {max(left, right):.3e}"
        ))
        u0, g1, g2, f = (sc.data[name] for name in ("u0", "g1", "g2", "f"))
        if u0.kind == "eigenmode" and g1.is_zero and g2.is_zero and f.is_zero and u0.args[0].is_integer():
            mode = eigenmode_field(int(u0.args[0]), p, sc.domain, sc.nx, sc.nt)
            distance = field.sup_distance(mode)
            outcome.checks.append(Check(
                "separable solution", distance <= EIGENMODE_TOL, f"sup distance {distance:.3e}"
            ))


class SolveNonlinearRunner(BaseRunner):
    """Picard iteration for F = f + coupling * sin(u)"""

    kind = "solve-nonlinear"

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        coupling = sc.coupling

        def reaction(x: FloatArray, t: FloatArray, u: FloatArray) -> FloatArray:
            result: FloatArray = coupling * np.sin(u)
            return result

        spec = replace(sc.problem(), reaction=reaction if coupling != 0.0 else None)
        field, report = picard_solve(spec, sc.nx, sc.nt, sc.numerics)
        field.to_csv(self.artifact(outcome, "field.csv"))
        report.to_csv(self.artifact(outcome, "report.csv"))
        write_plot_stub(self.out_dir)
        outcome.artifacts.append("plot_field.py")
        outcome.achieved["numerics.picard_tol"] = report.last_increment
        outcome.achieved["numerics.quad_tol"] = None
        outcome.achieved["numerics.series_tol"] = None
        outcome.checks.append(Check(
            "Picard converged", True,
            f"{report.iterations} iterations, window {report.window_length:.6g}",
        ))
        ratios = report.ratios(floor=max(10.0 * sc.numerics.panel_tol, sc.numerics.picard.tol))
        worst = max(ratios, default=0.0)
        outcome.checks.append(Check(
            "increments contract", worst <= CONTRACTION_RATIO, f"largest ratio {worst:.3f}"
        ))
        residual = picard_residual(field, spec, sc.numerics, report.window_length)
        outcome.checks.append(Check(
            "fixed-point residual",
            residual <= 2.0 * sc.numerics.picard.tol,
            f"sup residual {residual:.3e}",
        ))


class DecayStudyRunner(BaseRunner):
    """Long-time decay of the response to a compact boundary pulse"""

    kind = "decay-study"

    def _require_pulse_data(self) -> None:
        sc = self.scenario
        if sc.data["g1"].kind != "pulse":
            raise ScenarioError("data.g1", "decay study needs a pulse:t0,t1,amp boundary profile")
        for name in ("u0", "g2", "f"):
            if not sc.data[name].is_zero:
                raise ScenarioError(f"data.{name}", "decay study needs zero u0, g2 and f")
        support = sc.data["g1"].support_end
        if support is None or not sc.horizon > support:
            raise ScenarioError("decay.horizon", f"must exceed the pulse end {support}")

    def run(self, outcome: RunOutcome) -> None:
        sc = self.scenario
        _operator(self)
        self._require_pulse_data()
        report = decay_study(
            sc.problem(), sc.horizon, sc.numerics, sc.samples, nx=sc.nx, fd_check=sc.fd_check
        )
        report.to_csv(self.artifact(outcome, "report.csv"))
        outcome.achieved["numerics.quad_tol"] = None
        outcome.achieved["numerics.series_tol"] = None
        rate = report.rate
        outcome.checks.append(Check(
            "positive decay rate",
            rate is not None and math.isfinite(rate) and rate > 0,
            "no fit" if rate is None else f"rate {rate:.6g}",
        ))
        if sc.fd_check:
            fd_rate = report.fd_rate
            agrees = (
                rate is not None and fd_rate is not None and abs(fd_rate - rate) <= FD_RATE_TOL * abs(rate)
            )
            outcome.checks.append(Check(
                "finite-difference rate agrees",
                agrees,
                "no fit" if fd_rate is None else f"fd rate {fd_rate:.6g}",
            ))
