"""Semilinear problems by Picard iteration on the Green representation.

    u = G[u0, g1, g2] + V[f + R(u) + M(u)]

where R is the pointwise reaction and M the memory source
M(u)(x,t) = -int_0^t e^{-(t-tau)/r} f1(x, tau, u(x,tau)) dtau. Time is cut
into windows; only the current window is iterated, earlier windows enter V
as a fixed source history. Solution-dependent sources are sampled on the
grid and interpolated with bicubic splines for the volume integral.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import numpy.typing as npt
from scipy.interpolate import RectBivariateSpline

from config import PANEL_ORDER
from numerics.quadrature import adaptive_vector, gauss_legendre
from solvers.field import SpaceTimeField
from solvers.green import assemble_field, volume_term
from solvers.params import NumericsConfig, QuadratureConfig
from solvers.problem import ProblemSpec, evaluate
from utils.csv_io import write_csv
from utils.errors import AccuracyError, DataError, DomainError, NonConvergenceError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
HistoryFn = Callable[[FloatArray, FloatArray], FloatArray]

# window * Lipschitz constant kept below this
CONTRACTION_TARGET = 0.45
_LIPSCHITZ_STEP = 1e-6


def esjj_source(
    f1_history: HistoryFn,
    epsilon: float,
    t: float,
    x: float | FloatArray,
    q: QuadratureConfig = QuadratureConfig(),
) -> FloatArray:
    """-int_0^t e^{-(t-tau)/eps} f1(x, tau) dtau by adaptive quadrature"""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if t == 0:
        return np.zeros_like(xs)

    def integrand(tau: float) -> FloatArray:
        weight = math.exp(-(t - tau) / epsilon)
        return weight * evaluate(f1_history, xs, np.full_like(xs, tau), what="f1")

    try:
        value, _ = adaptive_vector(integrand, 0.0, t, tol=q.tol, rel_tol=q.rel_tol, limit=q.limit,
                                   where="memory source")
    except AccuracyError as err:
        raise err.located(f"t={t:.6g}") from err
    result: FloatArray = -value
    return result


def esjj_source_recursion(
    f1_history: HistoryFn,
    epsilon: float,
    times: FloatArray,
    x: FloatArray,
    order: int = PANEL_ORDER,
) -> FloatArray:
    """Memory source on a uniform time grid starting at 0, shape (len(x), len(times)).

    F(t + h) = e^{-h/eps} F(t) - int_t^{t+h} e^{-(t+h-tau)/eps} f1 dtau,
    each step integrated with an order-point Gauss-Legendre rule.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    times = np.asarray(times, dtype=np.float64)
    xs = np.asarray(x, dtype=np.float64)
    if times[0] != 0.0:
        raise DomainError("recursion starts at t = 0")
    steps = np.diff(times)
    if steps.size and not np.allclose(steps, steps[0], rtol=1e-10, atol=0.0):
        raise DomainError("recursion needs a uniform time grid")
    out = np.zeros((xs.size, times.size))
    if steps.size == 0:
        return out
    h = float(steps[0])
    nodes, weights = gauss_legendre(order)
    tau = times[:-1, np.newaxis] + 0.5 * h * (nodes + 1.0)
    decay = np.exp(-(times[1:, np.newaxis] - tau) / epsilon) * (0.5 * h * weights)
    f1 = evaluate(f1_history, xs[:, np.newaxis, np.newaxis], tau[np.newaxis], what="f1")
    increments = np.sum(f1 * decay[np.newaxis], axis=-1)
    factor = math.exp(-h / epsilon)
    for j in range(steps.size):
        out[:, j + 1] = factor * out[:, j] - increments[:, j]
    return out


@dataclass
class ConvergenceReport:
    """Sup-norm increments of every Picard iteration, tagged by window"""

    window_length: float
    increments: list[float] = field(default_factory=list)
    windows: list[int] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.increments)

    @property
    def last_increment(self) -> float:
        return self.increments[-1] if self.increments else math.inf

    def ratios(self, floor: float = 0.0) -> list[float]:
        """Successive increment ratios within each window, both above ``floor``"""
        out = []
        for k in range(1, len(self.increments)):
            prev, cur = self.increments[k - 1], self.increments[k]
            if self.windows[k] == self.windows[k - 1] and prev > floor and cur > floor:
                out.append(cur / prev)
        return out

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            ("iteration", "sup_increment"),
            ((k + 1, inc) for k, inc in enumerate(self.increments)),
        )


def _spline(x: FloatArray, t: FloatArray, values: FloatArray) -> HistoryFn:
    spline = RectBivariateSpline(x, t, values, kx=min(3, x.size - 1), ky=min(3, t.size - 1))

    def ev(xi: FloatArray, tau: FloatArray) -> FloatArray:
        a, b = np.broadcast_arrays(np.asarray(xi, dtype=np.float64), np.asarray(tau, dtype=np.float64))
        result: FloatArray = spline.ev(a.ravel(), b.ravel()).reshape(a.shape)
        return result

    return ev


class PicardSolver:
    """Windowed fixed-point iteration for one problem on one grid"""

    def __init__(self, spec: ProblemSpec, nx: int, nt: int, cfg: NumericsConfig) -> None:
        if spec.is_linear:
            logger.info("problem has no solution-dependent source; Picard converges in one step")
        self.spec = spec
        self.cfg = cfg
        self.x = np.linspace(0.0, spec.domain.L, nx)
        self.t = np.linspace(0.0, spec.domain.T, nt)
        self.fixed_source = spec.source
        linear_part = replace(spec, source=None, reaction=None, memory_source=None)
        self.base = assemble_field(linear_part, nx, nt, cfg, label="picard base")

    def nonlinear_source(self, values: FloatArray, end: int) -> FloatArray:
        """R(u) + M(u) on the grid columns 0..end-1"""
        spec = self.spec
        xg, tg = np.meshgrid(self.x, self.t[:end], indexing="ij")
        total = np.zeros_like(xg)
        if spec.reaction is not None:
            total += evaluate(spec.reaction, xg, tg, values[:, :end], what="reaction")
        memory = spec.memory_source
        if memory is not None and end > 1:
            u = _spline(self.x, self.t[:end], values[:, :end])
            reaction = memory.f1
            total += esjj_source_recursion(
                lambda xi, tau: reaction(xi, tau, u(xi, tau)), memory.relaxation, self.t[:end], self.x
            )
        if not np.all(np.isfinite(total)):
            raise DataError("solution-dependent source returned non-finite values")
        return total

    def apply(self, values: FloatArray, columns: range) -> FloatArray:
        """One Picard map evaluated on ``columns`` (interior nodes only)"""
        end = columns.stop
        interp = _spline(self.x, self.t[:end], self.nonlinear_source(values, end))
        fixed = self.fixed_source

        def source(xi: FloatArray, tau: FloatArray) -> FloatArray:
            value = interp(xi, tau)
            if fixed is not None:
                value = value + evaluate(fixed, xi, tau, what="source")
            return value

        out = values.copy()
        for j in columns:
            out[1:-1, j] = self.base.values[1:-1, j] + volume_term(
                self.x[1:-1], self.t[j], self.spec, self.cfg, source
            )
        return out

    def lipschitz_estimate(self, values: FloatArray) -> float:
        """Sup of |dR/du| on the current iterate plus relaxation * sup |df1/du|"""
        spec = self.spec
        xg, tg = np.meshgrid(self.x, self.t, indexing="ij")
        estimate = 0.0
        if spec.reaction is not None:
            r0 = evaluate(spec.reaction, xg, tg, values, what="reaction")
            r1 = evaluate(spec.reaction, xg, tg, values + _LIPSCHITZ_STEP, what="reaction")
            estimate += float(np.max(np.abs(r1 - r0))) / _LIPSCHITZ_STEP
        memory = spec.memory_source
        if memory is not None:
            f0 = evaluate(memory.f1, xg, tg, values, what="f1")
            f1 = evaluate(memory.f1, xg, tg, values + _LIPSCHITZ_STEP, what="f1")
            estimate += memory.relaxation * float(np.max(np.abs(f1 - f0))) / _LIPSCHITZ_STEP
        return estimate

    def window_columns(self, values: FloatArray) -> int:
        """Number of grid intervals per window"""
        pcfg = self.cfg.picard
        ht = self.t[1] - self.t[0]
        length = min(pcfg.window, self.spec.domain.T)
        if pcfg.adaptive_window:
            lip = self.lipschitz_estimate(values)
            if lip > 0:
                length = min(length, CONTRACTION_TARGET / lip)
        return max(1, int(math.floor(length / ht + 1e-9)))

    def solve(self) -> tuple[SpaceTimeField, ConvergenceReport]:
        pcfg = self.cfg.picard
        nt = self.t.size
        values = self.base.values.copy()
        width = self.window_columns(values)
        report = ConvergenceReport(window_length=width * (self.t[1] - self.t[0]))
        logger.info(f"Picard: {nt - 1} intervals in windows of {width}")
        start = 1
        window = 0
        while start < nt:
            columns = range(start, min(start + width, nt))
            # first iterate: the source evaluated at u = 0
            values[1:-1, columns.start : columns.stop] = 0.0
            values = self.apply(values, columns)
            for _ in range(pcfg.max_iter):
                updated = self.apply(values, columns)
                increment = float(np.max(np.abs(updated - values)))
                values = updated
                report.increments.append(increment)
                report.windows.append(window)
                logger.debug(f"Picard window {window}: increment {increment:.3e}")
                if increment < pcfg.tol:
                    break
            else:
                raise NonConvergenceError(
                    f"Picard iteration did not converge in window {window}",
                    report.last_increment,
                    list(report.increments),
                )
            logger.info(f"Picard window {window} converged, t <= {self.t[columns.stop - 1]:.6g}")
            start = columns.stop
            window += 1
        result = SpaceTimeField(values, self.spec.domain, {"source": "picard_solve"})
        return result, report


def picard_solve(
    spec: ProblemSpec, nx: int, nt: int, cfg: NumericsConfig = NumericsConfig()
) -> tuple[SpaceTimeField, ConvergenceReport]:
    """Solve the semilinear problem; the first iterate uses F(x, t, 0)"""
    spec.is_compatible()
    return PicardSolver(spec, nx, nt, cfg).solve()


def picard_residual(
    field: SpaceTimeField, spec: ProblemSpec, cfg: NumericsConfig, window_length: float | None = None
) -> float:
    """sup |u - (G + V[F(u)])| after re-substituting ``field`` once.

    The map is applied window by window as in the solve; without
    ``window_length`` all of [0, T] is one window.
    """
    solver = PicardSolver(spec, field.nx, field.nt, cfg)
    ht = solver.t[1] - solver.t[0]
    width = field.nt - 1 if window_length is None else max(1, int(round(window_length / ht)))
    worst = 0.0
    for start in range(1, field.nt, width):
        columns = range(start, min(start + width, field.nt))
        mapped = solver.apply(field.values, columns)
        worst = max(worst, float(np.max(np.abs(mapped - field.values))))
    return worst
