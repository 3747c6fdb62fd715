"""Fundamental solution of the integro-differential operator and its transform.

    K(r,t) = 1/(2 sqrt(pi eps)) [ e^{-r^2/4t - a t}/sqrt(t)
             - c int_0^t e^{-r^2/4y - a y} e^{-beta(t-y)} J1(2 sqrt(b y (t-y))) / sqrt(t-y) dy ]

with r = |x|/sqrt(eps). The coupling c and the placement of the square root
are selected by ``KernelVariant``; only ``ROOT_COUPLING`` (c = sqrt(b))
reproduces the closed-form transform e^{-r sigma}/(2 sqrt(eps) sigma) for
every b, the printed coupling c = b agrees with it at b = 1 only.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import overload

import numpy as np
import numpy.typing as npt

from config import PANEL_ORDER
from numerics.bessel import bessel_j1
from numerics.quadrature import integrate_panels
from oracles.laplace import numerical_laplace
from solvers.params import OperatorParams, QuadratureConfig
from utils.csv_io import write_csv
from utils.errors import AccuracyError, DomainError, PoleError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

# sup |J1| on the real line
J1_BOUND = 0.5819

# Panels of the memory integral in phi, graded toward the y = 0 end
MEMORY_EDGES = 0.5 * math.pi * np.array([0.0, 0.05, 0.15, 0.3, 0.5, 0.75, 1.0])
MEMORY_LEVELS = 6
NEGLIGIBLE_SPREAD = 50.0
CHUNK = 1024


class KernelVariant(Enum):
    """Integrand forms of the memory correction"""

    PRINTED = "printed"  # b * ... / sqrt(t - y)
    ENDPOINT_SWAPPED = "endpoint-swapped"  # b * ... / sqrt(y)
    ROOT_COUPLING = "root-coupling"  # sqrt(b) * ... / sqrt(t - y)

    def coupling(self, b: float) -> float:
        return math.sqrt(b) if self is KernelVariant.ROOT_COUPLING else b


DEFAULT_VARIANT = KernelVariant.ROOT_COUPLING


def _scaled_distance(x: FloatArray, p: OperatorParams) -> FloatArray:
    result: FloatArray = np.abs(x) / math.sqrt(p.epsilon)
    return result


def _check_times(t: FloatArray) -> None:
    if not np.all(t > 0):
        raise DomainError(f"kernel needs t > 0, got min t = {float(np.min(t))}")


def _memory_integral(
    r: FloatArray,
    t: FloatArray,
    p: OperatorParams,
    q: QuadratureConfig,
    variant: KernelVariant,
    derivative: bool,
) -> FloatArray:
    """2 sqrt(t) int_0^{pi/2} g(y(phi)) w(phi) dphi, the y-integral after removing 1/sqrt

    With y = t sin^2(phi) the factor dy/sqrt(t - y) becomes 2 sqrt(t) sin(phi) dphi
    and the swapped dy/sqrt(y) becomes 2 sqrt(t) cos(phi) dphi. The Bessel
    factor is J1(sqrt(b) t sin(2 phi)), so the integrand is smooth at both
    ends. With ``derivative`` the integrand carries the extra factor -r/(2y)
    of d/dr. Points with r^2/4t beyond ``NEGLIGIBLE_SPREAD`` contribute below
    1e-20 and are left at zero.
    """
    r_flat = r.ravel()
    t_flat = t.ravel()
    values = np.zeros_like(r_flat)
    active = np.flatnonzero(r_flat * r_flat / (4.0 * t_flat) < NEGLIGIBLE_SPREAD)
    root_b = math.sqrt(p.b)
    for start in range(0, active.size, CHUNK):
        idx = active[start : start + CHUNK]
        rc = r_flat[idx, np.newaxis]
        tc = t_flat[idx, np.newaxis]

        def integrand(phi: FloatArray, rc: FloatArray = rc, tc: FloatArray = tc) -> FloatArray:
            sin_phi = np.sin(phi)
            y = tc * sin_phi * sin_phi
            lag = tc - y
            weight = np.cos(phi) if variant is KernelVariant.ENDPOINT_SWAPPED else sin_phi
            bessel = bessel_j1(root_b * tc * np.sin(2.0 * phi))
            g = np.exp(-rc * rc / (4.0 * y) - p.a * y - p.beta * lag) * bessel * weight
            if derivative:
                g = g * (-rc / (2.0 * y))
            out: FloatArray = g
            return out

        try:
            chunk, _ = integrate_panels(
                integrand, MEMORY_EDGES, PANEL_ORDER, q.tol, MEMORY_LEVELS,
                where="kernel memory integral",
            )
        except AccuracyError as err:
            raise err.located("kernel") from err
        values[idx] = chunk
    result: FloatArray = (2.0 * np.sqrt(t_flat) * values).reshape(r.shape)
    return result


def _kernel(
    x: float | FloatArray,
    t: float | FloatArray,
    p: OperatorParams,
    q: QuadratureConfig,
    variant: KernelVariant,
    derivative: bool,
) -> FloatArray:
    p.require_kernel_admissible()
    xs, ts = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64))
    _check_times(ts)
    r = _scaled_distance(xs, p)
    lead = np.exp(-r * r / (4.0 * ts) - p.a * ts) / np.sqrt(ts)
    if derivative:
        lead = lead * (-r / (2.0 * ts))
    total = lead
    if p.b > 0:
        memory = _memory_integral(r, ts, p, q, variant, derivative)
        total = lead - variant.coupling(p.b) * memory
    value = total / (2.0 * math.sqrt(math.pi * p.epsilon))
    if derivative:
        value = value * np.sign(xs) / math.sqrt(p.epsilon)
    result: FloatArray = value
    return result


@overload
def kernel_K(
    x: float, t: float, p: OperatorParams, q: QuadratureConfig = ...,
    variant: KernelVariant = ...,
) -> float: ...
@overload
def kernel_K(
    x: FloatArray, t: float | FloatArray, p: OperatorParams, q: QuadratureConfig = ...,
    variant: KernelVariant = ...,
) -> FloatArray: ...


def kernel_K(
    x: float | FloatArray,
    t: float | FloatArray,
    p: OperatorParams,
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
) -> float | FloatArray:
    """Fundamental solution K at signed position x and time t > 0 (broadcasts)"""
    value = _kernel(x, t, p, q, variant, derivative=False)
    return float(value) if value.ndim == 0 else value


@overload
def kernel_K_dx(
    x: float, t: float, p: OperatorParams, q: QuadratureConfig = ...,
    variant: KernelVariant = ...,
) -> float: ...
@overload
def kernel_K_dx(
    x: FloatArray, t: float | FloatArray, p: OperatorParams, q: QuadratureConfig = ...,
    variant: KernelVariant = ...,
) -> FloatArray: ...


def kernel_K_dx(
    x: float | FloatArray,
    t: float | FloatArray,
    p: OperatorParams,
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
) -> float | FloatArray:
    """dK/dx, differentiated under the integral sign; odd in x, zero at x = 0"""
    value = _kernel(x, t, p, q, variant, derivative=True)
    return float(value) if value.ndim == 0 else value


def kernel_bound(x: FloatArray, t: FloatArray, p: OperatorParams) -> FloatArray:
    """Upper bound of |K| from |J1| <= 0.582 and e^{-r^2/4y} <= e^{-r^2/4t}"""
    r = _scaled_distance(np.asarray(x, dtype=np.float64), p)
    coupling = max(KernelVariant.PRINTED.coupling(p.b), DEFAULT_VARIANT.coupling(p.b))
    envelope = np.exp(-r * r / (4.0 * t)) * (1.0 / np.sqrt(t) + 2.0 * J1_BOUND * coupling * np.sqrt(t))
    result: FloatArray = envelope / (2.0 * math.sqrt(math.pi * p.epsilon))
    return result


def _require_half_plane(s: complex | ComplexArray, p: OperatorParams) -> None:
    s_arr = np.asarray(s)
    if np.any(s_arr == -p.beta):
        raise PoleError(f"sigma has a pole at s = -beta = {-p.beta}")
    if np.any(s_arr.real <= p.abscissa):
        raise DomainError(f"Re(s) must exceed max(-a, -beta) = {p.abscissa}")


@overload
def sigma(s: complex, p: OperatorParams, check_abscissa: bool = ...) -> complex: ...
@overload
def sigma(s: ComplexArray, p: OperatorParams, check_abscissa: bool = ...) -> ComplexArray: ...


def sigma(
    s: complex | ComplexArray, p: OperatorParams, check_abscissa: bool = True
) -> complex | ComplexArray:
    """Principal root of s + a + b/(s + beta); Re(sigma) >= 0"""
    if check_abscissa:
        _require_half_plane(s, p)
    elif np.any(np.asarray(s) == -p.beta):
        raise PoleError(f"sigma has a pole at s = -beta = {-p.beta}")
    s_arr = np.asarray(s, dtype=np.complex128)
    root = np.sqrt(s_arr + p.a + p.b / (s_arr + p.beta))
    return complex(root) if root.ndim == 0 else root


def kernel_laplace_closed(
    r: float | FloatArray,
    s: complex | ComplexArray,
    p: OperatorParams,
    check_abscissa: bool = True,
) -> complex | ComplexArray:
    """Closed-form transform e^{-r sigma}/(2 sqrt(eps) sigma) at scaled distance r"""
    sig = np.asarray(sigma(s, p, check_abscissa), dtype=np.complex128)
    value = np.exp(-np.asarray(r, dtype=np.float64) * sig) / (2.0 * math.sqrt(p.epsilon) * sig)
    return complex(value) if value.ndim == 0 else value


@dataclass(frozen=True)
class ValidationRow:
    r: float
    s: float
    closed: float
    numeric: float
    rel_err: float
    inconclusive: bool


@dataclass
class ValidationReport:
    """Closed-form versus numerical kernel transform, one row per (r, s)"""

    variant: KernelVariant
    rows: list[ValidationRow] = field(default_factory=list)

    @property
    def max_rel_error(self) -> float:
        return max((row.rel_err for row in self.rows), default=0.0)

    @property
    def inconclusive(self) -> bool:
        return any(row.inconclusive for row in self.rows)

    def passed(self, tol: float) -> bool:
        return self.max_rel_error < tol

    def to_csv(self, path: Path) -> None:
        write_csv(
            path,
            ("r", "s", "closed", "numeric", "rel_err"),
            [(row.r, row.s, row.closed, row.numeric, row.rel_err) for row in self.rows],
        )


def _kernel_tail(p: OperatorParams, s: float) -> Callable[[float], float]:
    """Tail of int e^{-st} |K| dt beyond T, from the envelope of ``kernel_bound``"""
    kappa = s + min(p.a, p.beta)
    coupling = max(KernelVariant.PRINTED.coupling(p.b), DEFAULT_VARIANT.coupling(p.b))
    scale = 1.0 / (2.0 * math.sqrt(math.pi * p.epsilon))

    def tail(horizon: float) -> float:
        decay = math.exp(-kappa * horizon)
        # int_T^inf t^{-1/2} e^{-kt} <= e^{-kT}/(k sqrt T); int_T^inf t^{1/2} e^{-kt} by parts
        inv_root = decay / (kappa * math.sqrt(horizon))
        root = decay * (math.sqrt(horizon) / kappa + 1.0 / (2.0 * kappa**2 * math.sqrt(horizon)))
        return scale * (inv_root + 2.0 * J1_BOUND * coupling * root)

    return tail


def validate_kernel_laplace(
    r_set: list[float],
    s_set: list[float],
    p: OperatorParams,
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
    tol: float = 1e-4,
) -> ValidationReport:
    """Compare the numerical transform of K with the closed form for every (r, s)"""
    p.require_kernel_admissible()
    report = ValidationReport(variant)
    if not s_set or not r_set:
        return report
    for s in s_set:
        if s - p.abscissa < 0.5:
            raise DomainError(f"s={s} is closer than 0.5 to the abscissa {p.abscissa}")
    positions = np.asarray(r_set, dtype=np.float64) * math.sqrt(p.epsilon)
    for s in s_set:
        closed = np.atleast_1d(np.asarray(kernel_laplace_closed(np.asarray(r_set), s, p))).real
        # absolute budget one hundredth of the relative target on the smallest value
        budget = 0.01 * tol * float(np.min(np.abs(closed)))
        transform = numerical_laplace(
            lambda t: kernel_K(positions, t, p, q, variant),
            s,
            tol=budget,
            tail=_kernel_tail(p, s),
            limit=q.limit,
        )
        numeric = np.atleast_1d(np.asarray(transform.value)).real
        for r, c, n in zip(r_set, closed, numeric, strict=True):
            rel = abs(n - c) / abs(c)
            report.rows.append(ValidationRow(r, s, float(c), float(n), rel, transform.inconclusive))
    logger.info(
        f"kernel transform check ({variant.value}): max rel error {report.max_rel_error:.3e}"
    )
    return report


@dataclass
class KernelAdjudication:
    """Outcome of validating every integrand form against the closed transform"""

    reports: dict[KernelVariant, ValidationReport]
    tol: float

    @property
    def passing(self) -> list[KernelVariant]:
        return [v for v, rep in self.reports.items() if rep.passed(self.tol)]


def adjudicate_kernel_form(
    r_set: list[float],
    s_set: list[float],
    p: OperatorParams,
    q: QuadratureConfig = QuadratureConfig(),
    tol: float = 1e-4,
) -> KernelAdjudication:
    """Validate the printed form first, then the alternatives, and record all"""
    reports = {
        variant: validate_kernel_laplace(r_set, s_set, p, q, variant, tol)
        for variant in (
            KernelVariant.PRINTED,
            KernelVariant.ENDPOINT_SWAPPED,
            KernelVariant.ROOT_COUPLING,
        )
    }
    outcome = KernelAdjudication(reports, tol)
    logger.info(f"kernel forms matching the closed transform: {[v.value for v in outcome.passing]}")
    return outcome
