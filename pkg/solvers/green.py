"""Explicit solution of the linear Dirichlet problem by the strip Green function.

    u(x,t) = int_0^L G(x,xi,t) u0(xi) dxi
             - 2 eps int_0^t theta_x(x, t-tau) g1(tau) dtau
             - 2 eps int_0^t theta_x(L-x, t-tau) g2(tau) dtau
             + int_0^t int_0^L G(x,xi,t-tau) F(xi,tau) dxi dtau

with G(x,xi,t) = theta(|x-xi|, t) - theta(x+xi, t). Both boundary terms carry
the same sign: the representation is symmetric under x -> L-x, g1 <-> g2.
Every time convolution is written in w = sqrt(t - tau), which removes the
weak singularity at tau = t.
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import numpy.typing as npt

from numerics.quadrature import geometric_edges, graded_edges, integrate_panels
from oracles.finite_difference import FdGrid, fd_solve_integro
from oracles.laplace import exponential_tail, numerical_laplace
from solvers.field import SpaceTimeField
from solvers.kernel import sigma
from solvers.params import NumericsConfig
from solvers.problem import ProblemSpec, SourceFn, evaluate, zero_space, zero_time
from solvers.theta import theta, theta_dx, theta_hat, theta_hat_dy
from utils.csv_io import write_csv
from utils.errors import AccuracyError, DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
_OUTER_PANELS = 4


def _interior(
    x: float | FloatArray, t: float | FloatArray, spec: ProblemSpec
) -> tuple[FloatArray, FloatArray]:
    xs, ts = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64))
    if np.any((xs <= 0) | (xs >= spec.domain.L)):
        raise DomainError(f"solution formula is evaluated for 0 < x < L = {spec.domain.L}")
    if not np.all(ts > 0):
        raise DomainError("solution formula needs t > 0")
    return np.array(xs), np.array(ts)


def green_dirichlet(
    x: FloatArray, xi: FloatArray, t: FloatArray, spec: ProblemSpec, cfg: NumericsConfig
) -> FloatArray:
    """G(x,xi,t) = theta(|x-xi|,t) - theta(x+xi,t); vanishes for x in {0, L}"""
    near, far = np.broadcast_arrays(np.abs(x - xi), x + xi)
    ts = np.broadcast_to(t, near.shape)
    both = theta(
        np.stack([near, far]), np.stack([ts, ts]), spec.domain, spec.params,
        cfg.series, cfg.quadrature,
    )
    result: FloatArray = both[0] - both[1]
    return result


def _space_convolution(
    xs: FloatArray,
    lag: FloatArray,
    density: Callable[[FloatArray], FloatArray],
    spec: ProblemSpec,
    cfg: NumericsConfig,
    where: str,
) -> FloatArray:
    """int_0^L G(x, xi, lag) density(xi) dxi, batched over the shape of xs"""
    L = spec.domain.L
    xs, lag = np.broadcast_arrays(xs, lag)
    centers = np.stack([xs, np.zeros_like(xs), np.full_like(xs, L)], axis=-1)
    edges = graded_edges(centers, np.sqrt(spec.params.epsilon * lag), 0.0, L)

    def integrand(xi: FloatArray) -> FloatArray:
        return green_dirichlet(xs[..., np.newaxis], xi, lag[..., np.newaxis], spec, cfg) * density(xi)

    value, _ = integrate_panels(integrand, edges, cfg.panel_order, cfg.panel_tol, cfg.max_levels, where)
    return value


def initial_term(
    x: float | FloatArray, t: float | FloatArray, spec: ProblemSpec, cfg: NumericsConfig
) -> FloatArray:
    """int_0^L G(x,xi,t) u0(xi) dxi"""
    xs, ts = _interior(x, t, spec)
    if spec.u0 is zero_space:
        return np.zeros_like(xs)
    return _space_convolution(
        xs, ts, lambda xi: evaluate(spec.u0, xi, what="u0"), spec, cfg, "initial term"
    )


def _boundary_convolution(
    g: Callable[[FloatArray], FloatArray],
    position: FloatArray,
    ts: FloatArray,
    spec: ProblemSpec,
    cfg: NumericsConfig,
    where: str,
) -> FloatArray:
    """int_0^t theta_x(position, t-tau) g(tau) dtau with tau = t - w^2.

    When the boundary data vanish after ``boundary_support`` the w-range
    starts at sqrt(t - support). The w-panels are graded geometrically
    towards w = 0 down to the diffusion scale of ``position``.
    """
    support = spec.boundary_support
    lo = np.sqrt(np.maximum(ts - support, 0.0)) if support is not None else np.zeros_like(ts)
    span = np.sqrt(ts) - lo
    width = position / math.sqrt(spec.params.epsilon) / span
    edges = geometric_edges(np.minimum(width, 1.0), 1.0)

    def integrand(z: FloatArray) -> FloatArray:
        w = lo[..., np.newaxis] + span[..., np.newaxis] * z
        lag = w * w
        tau = ts[..., np.newaxis] - lag
        slope = theta_dx(
            np.broadcast_to(position[..., np.newaxis], lag.shape), lag, spec.domain, spec.params,
            cfg.series, cfg.quadrature,
        )
        return slope * evaluate(g, tau, what=where) * 2.0 * w * span[..., np.newaxis]

    value, _ = integrate_panels(integrand, edges, cfg.panel_order, cfg.panel_tol, cfg.max_levels, where)
    return value


def boundary_term(
    x: float | FloatArray, t: float | FloatArray, spec: ProblemSpec, cfg: NumericsConfig
) -> FloatArray:
    """-2 eps int theta_x(x, t-tau) g1 dtau - 2 eps int theta_x(L-x, t-tau) g2 dtau"""
    xs, ts = _interior(x, t, spec)
    total = np.zeros_like(xs)
    for g, position, name in ((spec.g1, xs, "g1"), (spec.g2, spec.domain.L - xs, "g2")):
        if g is zero_time:
            continue
        total = total - 2.0 * spec.params.epsilon * _boundary_convolution(
            g, position, ts, spec, cfg, f"boundary term ({name})"
        )
    return total


def volume_term(
    x: float | FloatArray,
    t: float | FloatArray,
    spec: ProblemSpec,
    cfg: NumericsConfig,
    source: SourceFn | None = None,
) -> FloatArray:
    """int_0^t int_0^L G(x,xi,t-tau) F(xi,tau) dxi dtau; ``source`` overrides spec.source"""
    xs, ts = _interior(x, t, spec)
    f = source if source is not None else spec.source
    if f is None:
        return np.zeros_like(xs)
    root_t = np.sqrt(ts)
    edges = np.broadcast_to(np.linspace(0.0, 1.0, _OUTER_PANELS + 1), xs.shape + (_OUTER_PANELS + 1,))

    def outer(z: FloatArray) -> FloatArray:
        w = root_t[..., np.newaxis] * z
        lag = w * w
        tau = ts[..., np.newaxis] - lag
        inner = _space_convolution(
            np.broadcast_to(xs[..., np.newaxis], lag.shape),
            lag,
            lambda xi: evaluate(f, xi, tau[..., np.newaxis], what="source"),
            spec,
            cfg,
            "volume term (space)",
        )
        return inner * 2.0 * w * root_t[..., np.newaxis]

    value, _ = integrate_panels(
        outer, np.array(edges), cfg.panel_order, cfg.panel_tol, cfg.max_levels, "volume term (time)"
    )
    return value


def linear_solution(
    x: float | FloatArray,
    t: float | FloatArray,
    spec: ProblemSpec,
    cfg: NumericsConfig,
    source: SourceFn | None = None,
) -> FloatArray:
    """Sum of the initial, boundary and volume terms at interior points"""
    return (
        initial_term(x, t, spec, cfg)
        + boundary_term(x, t, spec, cfg)
        + volume_term(x, t, spec, cfg, source)
    )


def assemble_field(
    spec: ProblemSpec,
    nx: int,
    nt: int,
    cfg: NumericsConfig,
    source: SourceFn | None = None,
    label: str = "green",
) -> SpaceTimeField:
    """Evaluate the representation on every interior node, one time row per task.

    Rows are independent and each uses its own fixed quadrature, so the result
    does not depend on ``cfg.workers``.
    """
    if nx < 3 or nt < 2:
        raise DomainError(f"field grid needs nx >= 3 and nt >= 2, got {nx}x{nt}")
    x = np.linspace(0.0, spec.domain.L, nx)
    t = np.linspace(0.0, spec.domain.T, nt)
    values = np.zeros((nx, nt))
    values[:, 0] = evaluate(spec.u0, x, what="u0")
    values[0, 1:] = evaluate(spec.g1, t[1:], what="g1")
    values[-1, 1:] = evaluate(spec.g2, t[1:], what="g2")

    def row(j: int) -> FloatArray:
        try:
            return linear_solution(x[1:-1], t[j], spec, cfg, source)
        except AccuracyError as err:
            raise err.located(f"t={t[j]:.6g}") from err

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        for j, column in zip(range(1, nt), pool.map(row, range(1, nt)), strict=True):
            values[1:-1, j] = column
            logger.debug(f"{label}: row t={t[j]:.6g} done")
    return SpaceTimeField(values, spec.domain, {"source": label})


def solve_linear_dirichlet(
    spec: ProblemSpec, nx: int, nt: int, cfg: NumericsConfig = NumericsConfig()
) -> SpaceTimeField:
    """Field of the linear problem: interior from the representation, edges from data"""
    if not spec.is_linear:
        raise DomainError("problem has a solution-dependent source; use picard_solve")
    spec.is_compatible()
    logger.info(f"assembling Green solution on {nx}x{nt} nodes")
    return assemble_field(spec, nx, nt, cfg, label="solve_linear_dirichlet")


def _transform(fn: Callable[[float], FloatArray], s: complex, spec: ProblemSpec,
               cfg: NumericsConfig, data_bound: float) -> complex | ComplexArray:
    tail = exponential_tail(s, bound=data_bound)
    result = numerical_laplace(fn, s, tol=cfg.panel_tol, tail=tail, limit=cfg.quadrature.limit)
    return result.value


def resolvent_solution_hat(
    x: float,
    s: complex,
    spec: ProblemSpec,
    cfg: NumericsConfig = NumericsConfig(),
    data_bound: float = 1.0,
) -> complex:
    """Laplace-domain solution at 0 <= x <= L.

    The data transforms are computed numerically assuming |data| <= data_bound;
    the x-integral uses the same Green ordering as the time domain.
    """
    L = spec.domain.L
    if not 0.0 <= x <= L:
        raise DomainError(f"x must lie in [0, L = {L}], got {x}")
    p = spec.params
    sig = complex(sigma(s, p))
    value = 0j
    for g, position in ((spec.g1, x), (spec.g2, L - x)):
        if g is zero_time:
            continue
        g_hat = complex(np.ravel(_transform(
            lambda t, g=g: evaluate(g, np.array([t]), what="boundary data"), s, spec, cfg, data_bound
        ))[0])
        value += -2.0 * p.epsilon * g_hat * complex(theta_hat_dy(position, sig, spec.domain, p))
    if 0.0 < x < L and (spec.u0 is not zero_space or spec.source is not None):
        value += complex(_resolvent_interior(x, s, sig, spec, cfg, data_bound))
    return value


def _resolvent_interior(
    x: float, s: complex, sig: complex, spec: ProblemSpec, cfg: NumericsConfig, data_bound: float
) -> complex:
    L = spec.domain.L
    width = math.sqrt(spec.params.epsilon) / max(abs(sig), 1e-12)
    edges = graded_edges(np.array([x, 0.0, L]), width, 0.0, L)
    source = spec.source

    def integrand(xi: FloatArray) -> ComplexArray:
        kernel = np.asarray(theta_hat(np.abs(x - xi), sig, spec.domain, spec.params)) - np.asarray(
            theta_hat(x + xi, sig, spec.domain, spec.params)
        )
        density = evaluate(spec.u0, xi, what="u0").astype(np.complex128)
        if source is not None:
            density = density + np.asarray(_transform(
                lambda t: evaluate(source, xi, np.asarray(t), what="source"), s, spec, cfg, data_bound
            ))
        result: ComplexArray = kernel * density
        return result

    value, _ = integrate_panels(
        integrand, edges, cfg.panel_order, cfg.panel_tol, cfg.max_levels,
        "resolvent interior",
    )
    return complex(value)


@dataclass
class DecayReport:
    """sup_x |boundary response| at log-spaced times and the fitted decay rate"""

    times: FloatArray
    sup_values: FloatArray
    rate: float | None
    fd_rate: float | None = None
    fd_sup_values: FloatArray | None = field(default=None)

    def to_csv(self, path: Path) -> None:
        fd = self.fd_sup_values if self.fd_sup_values is not None else np.full_like(self.times, np.nan)
        write_csv(
            path,
            ("t", "sup_boundary", "sup_fd"),
            zip(self.times.tolist(), self.sup_values.tolist(), fd.tolist(), strict=True),
        )


def fit_decay_rate(times: FloatArray, values: FloatArray) -> float | None:
    """Least-squares rate of log(values) over the last decade of ``times``"""
    last = (times >= times[-1] / 10.0) & (values > 0)
    if np.count_nonzero(last) < 2:
        return None
    slope, _ = np.polyfit(times[last], np.log(values[last]), 1)
    return float(-slope)


def decay_study(
    spec: ProblemSpec,
    horizon: float,
    cfg: NumericsConfig = NumericsConfig(),
    samples: int = 12,
    nx: int = 21,
    fd_check: bool = False,
) -> DecayReport:
    """Long-time response to a compact boundary pulse on the left edge"""
    if spec.u0 is not zero_space or spec.g2 is not zero_time or spec.source is not None:
        raise DomainError("decay study needs u0 = 0, g2 = 0 and no source")
    if spec.boundary_support is None:
        raise DomainError("decay study needs the support of the boundary pulse")
    if samples < 2 or not horizon > spec.boundary_support:
        raise DomainError("decay study needs samples >= 2 and horizon beyond the pulse")
    times = np.logspace(math.log10(horizon / 100.0), math.log10(horizon), samples)
    x = np.linspace(0.0, spec.domain.L, nx)[1:-1]
    response = boundary_term(x[:, np.newaxis], times[np.newaxis, :], spec, cfg)
    sup_values = np.max(np.abs(response), axis=0)
    rate = fit_decay_rate(times, sup_values)
    report = DecayReport(times, sup_values, rate)
    logger.info(f"decay study: fitted rate {rate}")
    if fd_check:
        long_run = replace(spec, domain=replace(spec.domain, T=horizon))
        grid = FdGrid.for_domain(long_run.domain, nx=nx, nt=None, epsilon=spec.params.epsilon)
        fd = fd_solve_integro(long_run, grid)
        columns = np.clip(np.rint(times / fd.ht).astype(int), 0, fd.nt - 1)
        report.fd_sup_values = np.max(np.abs(fd.values[:, columns]), axis=0)
        report.fd_rate = fit_decay_rate(times, report.fd_sup_values)
        logger.info(f"decay study: finite-difference rate {report.fd_rate}")
    return report
