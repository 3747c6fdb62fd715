"""Real Bessel functions J0 and J1 of the first kind.

The real axis is split at ``series_cutoff``. Below it the ascending power
series is summed with Neumaier compensation; above it the Hankel asymptotic
form is used, its two auxiliary functions P and Q given by the rational
approximations of the Cephes library (degree 6/6 and 7/7 in (5/x)^2).

Both functions accept floats or numpy arrays and return the same shape.
"""

from dataclasses import dataclass
from typing import overload

import numpy as np
import numpy.typing as npt

from config import BESSEL_CONTRACT_LIMIT, BESSEL_SERIES_CUTOFF
from utils.errors import DomainError
from utils.logger import logger

FloatArray = npt.NDArray[np.float64]

SQ2OPI = 7.9788456080286535587989e-1  # sqrt(2/pi)
PIO4 = 7.85398163397448309616e-1  # pi/4
THPIO4 = 2.35619449019234492885  # 3*pi/4

# Order 0, x > 5
PP0 = np.array([
    7.96936729297347051624e-4,
    8.28352392107440799803e-2,
    1.23953371646414299388e0,
    5.44725003058768775090e0,
    8.74716500199817011941e0,
    5.30324038235394892183e0,
    9.99999999999999997821e-1,
])
PQ0 = np.array([
    9.24408810558863637013e-4,
    8.56288474354474431428e-2,
    1.25352743901058953537e0,
    5.47097740330417105182e0,
    8.76190883237069594232e0,
    5.30605288235394617618e0,
    1.00000000000000000218e0,
])
QP0 = np.array([
    -1.13663838898469149931e-2,
    -1.28252718670509318512e0,
    -1.95539544257735972385e1,
    -9.32060152123768231369e1,
    -1.77681167980488050595e2,
    -1.47077505154951170175e2,
    -5.14105326766599330220e1,
    -6.05014350600728481186e0,
])
QQ0 = np.array([  # leading 1.0 implied
    6.43178256118178023184e1,
    8.56430025976980587198e2,
    3.88240183605401609683e3,
    7.24046774195652478189e3,
    5.93072701187316984827e3,
    2.06209331660327847417e3,
    2.42005740240291393179e2,
])

# Order 1, x > 5
PP1 = np.array([
    7.62125616208173112003e-4,
    7.31397056940917570436e-2,
    1.12719608129684925192e0,
    5.11207951146807644818e0,
    8.42404590141772420927e0,
    5.21451598682361504063e0,
    1.00000000000000000254e0,
])
PQ1 = np.array([
    5.71323128072548699714e-4,
    6.88455908754495404082e-2,
    1.10514232634061696926e0,
    5.07386386128601488557e0,
    8.39985554327604159757e0,
    5.20982848682361821619e0,
    9.99999999999999997461e-1,
])
QP1 = np.array([
    5.10862594750176621635e-2,
    4.98213872951233449420e0,
    7.58238284132545283818e1,
    3.66779609360150777800e2,
    7.10856304998926107277e2,
    5.97489612400613639965e2,
    2.11688757100572135698e2,
    2.52070205858023719784e1,
])
QQ1 = np.array([  # leading 1.0 implied
    7.42373277035675149943e1,
    1.05644886038262816351e3,
    4.98641058337653607651e3,
    9.56231892404756170795e3,
    7.99704160447350683650e3,
    2.82619278517639096600e3,
    3.36093607810698293419e2,
])

# Largest cutoff for which the double-precision series still meets 1e-12
_MAX_SERIES_CUTOFF = 12.0
_SERIES_TERMS = 48


@dataclass(frozen=True)
class BesselAccuracy:
    """Evaluation policy: accuracy target and the series/asymptotic switch"""

    target_rel_error: float = 1e-12
    series_cutoff: float = BESSEL_SERIES_CUTOFF

    def __post_init__(self) -> None:
        if not self.target_rel_error > 0:
            raise DomainError(f"target_rel_error must be > 0, got {self.target_rel_error}")
        # The rational P/Q fits are only valid for x > 5
        if not 5.0 <= self.series_cutoff <= _MAX_SERIES_CUTOFF:
            raise DomainError(
                f"series_cutoff must lie in [5, {_MAX_SERIES_CUTOFF}], got {self.series_cutoff}"
            )


DEFAULT_ACCURACY = BesselAccuracy()


def _polevl(x: FloatArray, coef: FloatArray) -> FloatArray:
    """Evaluate coef[0] x^N + ... + coef[N]"""
    ans = np.full_like(x, coef[0])
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _p1evl(x: FloatArray, coef: FloatArray) -> FloatArray:
    """Evaluate x^N + coef[0] x^(N-1) + ... + coef[N-1]"""
    ans = x + coef[0]
    for c in coef[1:]:
        ans = ans * x + c
    return ans


def _series(ax: FloatArray, order: int) -> FloatArray:
    """Ascending series of J_order at non-negative ax, compensated summation"""
    q = 0.25 * ax * ax
    term = np.ones_like(ax) if order == 0 else 0.5 * ax
    total = term.copy()
    comp = np.zeros_like(ax)
    for k in range(1, _SERIES_TERMS):
        term = term * (-q) / (k * (k + order))
        tmp = total + term
        comp += np.where(np.abs(total) >= np.abs(term), (total - tmp) + term, (term - tmp) + total)
        total = tmp
        if not np.any(np.abs(term) > 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    result: FloatArray = total + comp
    return result


def _hankel(ax: FloatArray, order: int) -> FloatArray:
    """Asymptotic form sqrt(2/(pi x)) (P cos(chi) - (5/x) Q sin(chi))"""
    w = 5.0 / ax
    z = w * w
    if order == 0:
        p = _polevl(z, PP0) / _polevl(z, PQ0)
        q = _polevl(z, QP0) / _p1evl(z, QQ0)
        xn = ax - PIO4
    else:
        p = _polevl(z, PP1) / _polevl(z, PQ1)
        q = _polevl(z, QP1) / _p1evl(z, QQ1)
        xn = ax - THPIO4
    result: FloatArray = SQ2OPI * (p * np.cos(xn) - w * q * np.sin(xn)) / np.sqrt(ax)
    return result


def _evaluate(z: npt.ArrayLike, order: int, accuracy: BesselAccuracy) -> FloatArray:
    arr = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"J{order} needs finite arguments")
    ax = np.abs(arr)
    if np.any(ax > BESSEL_CONTRACT_LIMIT):
        logger.warning(
            f"J{order} evaluated at |z|={float(ax.max()):.3e} > {BESSEL_CONTRACT_LIMIT:.0e}, "
            "accuracy reduced"
        )
    low = ax <= accuracy.series_cutoff
    out = np.empty_like(ax)
    if np.any(low):
        out[low] = _series(ax[low], order)
    if not np.all(low):
        out[~low] = _hankel(ax[~low], order)
    if order == 1:
        out = np.where(arr < 0, -out, out)
    return out


@overload
def bessel_j0(z: float, accuracy: BesselAccuracy = ...) -> float: ...
@overload
def bessel_j0(z: FloatArray, accuracy: BesselAccuracy = ...) -> FloatArray: ...


def bessel_j0(
    z: float | FloatArray, accuracy: BesselAccuracy = DEFAULT_ACCURACY
) -> float | FloatArray:
    """J0(z) for real z; even in z"""
    out = _evaluate(z, 0, accuracy)
    return float(out) if np.ndim(z) == 0 else out


@overload
def bessel_j1(z: float, accuracy: BesselAccuracy = ...) -> float: ...
@overload
def bessel_j1(z: FloatArray, accuracy: BesselAccuracy = ...) -> FloatArray: ...


def bessel_j1(
    z: float | FloatArray, accuracy: BesselAccuracy = DEFAULT_ACCURACY
) -> float | FloatArray:
    """J1(z) for real z; odd in z, sign handled exactly"""
    out = _evaluate(z, 1, accuracy)
    return float(out) if np.ndim(z) == 0 else out
