"""Numerical Laplace transform and fixed-Talbot contour inversion.

Both are independent of the closed forms they are used to check: the forward
transform integrates the time-domain function directly, the inversion only
evaluates the transform on a deformed Bromwich contour.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from config import CONTOUR_NODES
from numerics.quadrature import adaptive_vector
from utils.errors import AccuracyError, DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
TimeFunction = Callable[[float], float | FloatArray]
TailBound = Callable[[float], float]


@dataclass(frozen=True)
class LaplaceValue:
    """Truncated transform with its error budget"""

    value: complex | ComplexArray
    error: float
    tail: float
    horizon: float
    inconclusive: bool


def exponential_tail(s: complex, bound: float = 1.0, decay_rate: float = 0.0) -> TailBound:
    """Tail bound for |f(t)| <= bound * exp(-decay_rate t)"""
    kappa = s.real + decay_rate
    if kappa <= 0:
        raise DomainError(f"Re(s) + decay rate must be > 0, got {kappa}")
    return lambda horizon: bound * math.exp(-kappa * horizon) / kappa


def choose_horizon(tail: TailBound, tol: float, start: float = 1.0, limit: float = 1e6) -> float:
    """Smallest doubling of ``start`` whose tail bound is below 0.1 * tol"""
    horizon = start
    while tail(horizon) > 0.1 * tol:
        horizon *= 2.0
        if horizon > limit:
            raise DomainError(f"no transform horizon below {limit:.0e} meets tol={tol:.1e}")
    return horizon


def numerical_laplace(
    f: TimeFunction,
    s: complex,
    T_max: float | None = None,
    tol: float = 1e-10,
    tail: TailBound | None = None,
    limit: int = 400,
) -> LaplaceValue:
    """int_0^T_max e^{-st} f(t) dt plus the tail bound in the error estimate.

    The substitution t = u^2 removes integrable 1/sqrt(t) behaviour at t = 0.
    ``f`` may return an array; the transform is then taken elementwise. When
    ``tail`` is omitted, |f| <= 1 is assumed.
    """
    s = complex(s)
    if s.real <= 0 and tail is None:
        raise DomainError(f"Re(s) must be > 0 without a tail bound, got {s}")
    bound = tail if tail is not None else exponential_tail(s)
    horizon = T_max if T_max is not None else choose_horizon(bound, tol)
    if horizon <= 0:
        raise DomainError(f"T_max must be > 0, got {horizon}")

    def integrand(u: float) -> FloatArray:
        t = u * u
        weight = 2.0 * u * np.exp(-s * t)
        value = weight * np.asarray(f(t), dtype=np.float64)
        return np.concatenate([np.ravel(value.real), np.ravel(value.imag)])

    stacked, err = adaptive_vector(
        integrand, 0.0, math.sqrt(horizon), tol=tol, limit=limit, where=f"Laplace transform s={s}"
    )
    half = stacked.size // 2
    value = stacked[:half] + 1j * stacked[half:]
    tail_value = bound(horizon)
    inconclusive = tail_value > tol
    if inconclusive:
        logger.warning(f"Laplace tail bound {tail_value:.2e} above tol {tol:.1e} at s={s}")
    result: complex | ComplexArray = complex(value[0]) if half == 1 else value
    return LaplaceValue(result, err + tail_value, tail_value, horizon, inconclusive)


def _talbot(
    F_hat: Callable[[ComplexArray], ComplexArray], t: float, nodes: int, scale: float | None = None
) -> float:
    """Fixed-Talbot rule with ``nodes`` points on the cotangent contour.

    The contour scale defaults to 2 nodes/(5 t); passing the scale of a coarser
    rule keeps the contour and halves the step along it.
    """
    r = scale if scale is not None else 2.0 * nodes / (5.0 * t)
    theta = np.arange(1, nodes) * math.pi / nodes
    cot = 1.0 / np.tan(theta)
    s = np.concatenate([[r + 0j], r * theta * (cot + 1j)])
    values = np.asarray(F_hat(s), dtype=np.complex128)
    sigma = theta + (theta * cot - 1.0) * cot
    head = 0.5 * values[0].real * math.exp(r * t)
    body = np.exp(t * s[1:]) * values[1:] * (1.0 + 1j * sigma)
    return float(r / nodes * (head + np.sum(body.real)))


def laplace_invert_contour(
    F_hat: Callable[[ComplexArray], ComplexArray],
    t: float,
    node_count: int = CONTOUR_NODES,
    tol: float = 1e-6,
) -> float:
    """Invert ``F_hat`` at time t on a deformed Bromwich contour.

    ``F_hat`` must accept an array of complex frequencies and be analytic to
    the right of and around the contour. The error estimate compares the
    rule with ``node_count`` nodes against the one with twice as many on the
    same contour, whose roundoff stays that of the coarser rule.
    """
    if not t > 0:
        raise DomainError(f"inversion needs t > 0, got {t}")
    if node_count < 4:
        raise DomainError(f"node_count must be >= 4, got {node_count}")
    scale = 2.0 * node_count / (5.0 * t)
    value = _talbot(F_hat, t, node_count, scale)
    doubled = _talbot(F_hat, t, 2 * node_count, scale)
    estimate = abs(doubled - value)
    if not (math.isfinite(value) and math.isfinite(doubled)) or estimate > tol:
        raise AccuracyError("contour inversion disagrees between node counts", estimate, f"t={t}")
    return value
