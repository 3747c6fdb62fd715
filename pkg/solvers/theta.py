"""Strip theta functions built from the fundamental solution by images.

    theta(x,t) = sum_n K(x + 2nL, t)

and its Laplace-domain counterpart

    theta_hat(y, sigma) = cosh(sigma (L-y)/sqrt(eps)) / (2 sqrt(eps) sigma sinh(sigma L/sqrt(eps)))
"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import overload

import numpy as np
import numpy.typing as npt

from solvers.kernel import DEFAULT_VARIANT, KernelVariant, kernel_K, kernel_K_dx
from solvers.params import OperatorParams, QuadratureConfig, SeriesConfig, StripDomain
from utils.errors import AccuracyError, DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
ImageFn = Callable[[FloatArray, FloatArray], FloatArray]

# Above this Re(sigma L / sqrt(eps)) the hyperbolic ratios use exponentials
EXPONENTIAL_FORM_THRESHOLD = 30.0
_FIRST_BLOCK = 4


@dataclass(frozen=True)
class SeriesValue:
    """Truncated image sum and the size of the last terms kept"""

    value: FloatArray
    estimate: float
    terms: int


def _image_sum(
    fn: ImageFn, x: FloatArray, t: FloatArray, d: StripDomain, cfg: SeriesConfig, where: str
) -> SeriesValue:
    """Symmetric partial sum over image pairs n = +-k, evaluated blockwise"""
    total = fn(x, t)
    quiet = 0
    estimate = np.inf
    done = 0
    block = _FIRST_BLOCK
    while done < cfg.max_terms:
        ks = np.arange(done + 1, min(done + block, cfg.max_terms) + 1)
        shifts = 2.0 * d.L * ks
        xs = np.concatenate([x[..., np.newaxis] + shifts, x[..., np.newaxis] - shifts], axis=-1)
        ts = np.broadcast_to(t[..., np.newaxis], xs.shape)
        images = fn(xs, ts)
        pairs = images[..., : ks.size] + images[..., ks.size :]
        for j in range(ks.size):
            size = float(np.max(np.abs(pairs[..., j]), initial=0.0))
            total = total + pairs[..., j]
            quiet = quiet + 1 if size < cfg.tol else 0
            estimate = size if quiet == 1 else estimate + size
            if quiet >= cfg.settle_count:
                logger.debug(f"{where}: settled after {done + j + 1} image pairs")
                return SeriesValue(total, estimate, done + j + 1)
        done += ks.size
        block *= 2
    raise AccuracyError(f"image series did not settle in {cfg.max_terms} pairs", estimate, where)


def _prepare(
    x: float | FloatArray, t: float | FloatArray
) -> tuple[FloatArray, FloatArray]:
    xs, ts = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64))
    if not np.all(ts > 0):
        raise DomainError(f"theta needs t > 0, got min t = {float(np.min(ts))}")
    return xs, ts


def theta_series(
    x: float | FloatArray,
    t: float | FloatArray,
    d: StripDomain,
    p: OperatorParams,
    cfg: SeriesConfig = SeriesConfig(),
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
    derivative: bool = False,
) -> SeriesValue:
    """theta or theta_x together with the truncation estimate"""
    xs, ts = _prepare(x, t)
    if derivative:
        return _image_sum(lambda a, b: kernel_K_dx(a, b, p, q, variant), xs, ts, d, cfg, "theta_dx")
    return _image_sum(lambda a, b: kernel_K(a, b, p, q, variant), xs, ts, d, cfg, "theta")


@overload
def theta(
    x: float, t: float, d: StripDomain, p: OperatorParams, cfg: SeriesConfig = ...,
    q: QuadratureConfig = ..., variant: KernelVariant = ...,
) -> float: ...
@overload
def theta(
    x: FloatArray, t: float | FloatArray, d: StripDomain, p: OperatorParams,
    cfg: SeriesConfig = ..., q: QuadratureConfig = ..., variant: KernelVariant = ...,
) -> FloatArray: ...


def theta(
    x: float | FloatArray,
    t: float | FloatArray,
    d: StripDomain,
    p: OperatorParams,
    cfg: SeriesConfig = SeriesConfig(),
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
) -> float | FloatArray:
    """Strip theta function; even in x and 2L-periodic"""
    value = theta_series(x, t, d, p, cfg, q, variant).value
    return float(value) if value.ndim == 0 else value


@overload
def theta_dx(
    x: float, t: float, d: StripDomain, p: OperatorParams, cfg: SeriesConfig = ...,
    q: QuadratureConfig = ..., variant: KernelVariant = ...,
) -> float: ...
@overload
def theta_dx(
    x: FloatArray, t: float | FloatArray, d: StripDomain, p: OperatorParams,
    cfg: SeriesConfig = ..., q: QuadratureConfig = ..., variant: KernelVariant = ...,
) -> FloatArray: ...


def theta_dx(
    x: float | FloatArray,
    t: float | FloatArray,
    d: StripDomain,
    p: OperatorParams,
    cfg: SeriesConfig = SeriesConfig(),
    q: QuadratureConfig = QuadratureConfig(),
    variant: KernelVariant = DEFAULT_VARIANT,
) -> float | FloatArray:
    """x-derivative of theta, summed termwise"""
    value = theta_series(x, t, d, p, cfg, q, variant, derivative=True).value
    return float(value) if value.ndim == 0 else value


def _hyperbolic_parts(
    y: float | FloatArray, sigma_val: complex | ComplexArray, d: StripDomain, p: OperatorParams
) -> tuple[ComplexArray, ComplexArray, ComplexArray]:
    ys, sig = np.broadcast_arrays(
        np.asarray(y, dtype=np.float64), np.asarray(sigma_val, dtype=np.complex128)
    )
    if not np.all(sig.real > 0):
        raise DomainError("theta_hat needs Re(sigma) > 0")
    # the closed form holds on one period [0, 2L]
    if np.any((ys < 0) | (ys > 2.0 * d.L)):
        raise DomainError(f"theta_hat needs 0 <= y <= 2L = {2.0 * d.L}")
    root_eps = np.sqrt(p.epsilon)
    A = sig * (d.L - ys) / root_eps
    B = sig * d.L / root_eps
    return sig, A, B


def _ratio(A: ComplexArray, B: ComplexArray, sign: float) -> ComplexArray:
    """(e^A + sign e^-A) / (e^B - e^-B) without overflow for large Re B"""
    large = B.real > EXPONENTIAL_FORM_THRESHOLD
    safe_B = np.where(large, 1.0, B)
    safe_A = np.where(large, 0.0, A)
    direct = (np.exp(safe_A) + sign * np.exp(-safe_A)) / (np.exp(safe_B) - np.exp(-safe_B))
    big_B = np.where(large, B, EXPONENTIAL_FORM_THRESHOLD + 1.0)
    big_A = np.where(large, A, 0.0)
    rewritten = (np.exp(big_A - big_B) + sign * np.exp(-big_A - big_B)) / (1.0 - np.exp(-2.0 * big_B))
    result: ComplexArray = np.where(large, rewritten, direct)
    return result


def theta_hat(
    y: float | FloatArray, sigma_val: complex | ComplexArray, d: StripDomain, p: OperatorParams
) -> complex | ComplexArray:
    """Closed hyperbolic form of the transformed theta function, 0 <= y <= 2L"""
    sig, A, B = _hyperbolic_parts(y, sigma_val, d, p)
    value = _ratio(A, B, 1.0) / (2.0 * np.sqrt(p.epsilon) * sig)
    return complex(value) if value.ndim == 0 else value


def theta_hat_dy(
    y: float | FloatArray, sigma_val: complex | ComplexArray, d: StripDomain, p: OperatorParams
) -> complex | ComplexArray:
    """d/dy theta_hat = -sinh(A)/(2 eps sinh(B)); -1/(2 eps) at y = 0, 0 at y = L"""
    _, A, B = _hyperbolic_parts(y, sigma_val, d, p)
    value = -_ratio(A, B, -1.0) / (2.0 * p.epsilon)
    return complex(value) if value.ndim == 0 else value


def theta_hat_series(
    y: float, sigma_val: complex, d: StripDomain, p: OperatorParams, cfg: SeriesConfig = SeriesConfig()
) -> tuple[complex, float]:
    """Partial sums of sum_n e^{-sigma |y + 2nL|/sqrt(eps)} / (2 sqrt(eps) sigma)"""
    sig = complex(sigma_val)
    if sig.real <= 0:
        raise DomainError("theta_hat_series needs Re(sigma) > 0")
    scale = 1.0 / (2.0 * np.sqrt(p.epsilon) * sig)
    rate = sig / np.sqrt(p.epsilon)
    total = complex(np.exp(-rate * abs(y))) * scale
    quiet = 0
    estimate = np.inf
    for n in range(1, cfg.max_terms + 1):
        pair = (np.exp(-rate * abs(y + 2 * n * d.L)) + np.exp(-rate * abs(y - 2 * n * d.L))) * scale
        total += complex(pair)
        size = abs(pair)
        quiet = quiet + 1 if size < cfg.tol else 0
        estimate = size if quiet == 1 else estimate + size
        if quiet >= cfg.settle_count:
            return total, float(estimate)
    raise AccuracyError(f"transformed image series did not settle in {cfg.max_terms} pairs", estimate)
