"""Closed-form time factors of separable solutions.

On the Dirichlet mode sin(sqrt(mu) x) the integro-differential equation
reduces, after applying (d/dt + beta), to the damped oscillator

    T'' + (k + beta) T' + (b + beta k) T = 0,   k = eps mu + a,
    T(0) = 1, T'(0) = -k.
"""

import math

import numpy as np
import numpy.typing as npt

from solvers.field import SpaceTimeField
from solvers.params import OperatorParams, StripDomain
from utils.errors import DomainError

FloatArray = npt.NDArray[np.float64]

# |discriminant| below this (relative) counts as a double root
DOUBLE_ROOT_TOL = 1e-12


def damped_oscillator(
    c1: float,
    c0: float,
    x0: float,
    v0: float,
    t: float | FloatArray,
    order: int = 0,
) -> float | FloatArray:
    """order-th derivative of the solution of T'' + c1 T' + c0 T = 0, T(0)=x0, T'(0)=v0"""
    if order not in (0, 1, 2):
        raise DomainError(f"derivative order must be 0, 1 or 2, got {order}")
    ts = np.asarray(t, dtype=np.float64)
    disc = c1 * c1 - 4.0 * c0
    scale = max(c1 * c1, abs(4.0 * c0), 1.0)
    if abs(disc) <= DOUBLE_ROOT_TOL * scale:
        r = -0.5 * c1
        d = v0 - r * x0
        growth = np.exp(r * ts)
        body = x0 + d * ts
        if order == 0:
            value = body * growth
        elif order == 1:
            value = (d + r * body) * growth
        else:
            value = (2.0 * d * r + r * r * body) * growth
    elif disc > 0:
        root = math.sqrt(disc)
        r1 = 0.5 * (-c1 + root)
        r2 = 0.5 * (-c1 - root)
        w1 = (v0 - r2 * x0) / (r1 - r2)
        w2 = x0 - w1
        value = w1 * r1**order * np.exp(r1 * ts) + w2 * r2**order * np.exp(r2 * ts)
    else:
        z = complex(-0.5 * c1, 0.5 * math.sqrt(-disc))
        # T = Re(C e^{zt}) with Re C = x0 and Re(C z) = v0
        C = complex(x0, -(v0 - z.real * x0) / z.imag)
        value = (C * z**order * np.exp(z * ts)).real
    return float(value) if np.ndim(t) == 0 else np.asarray(value, dtype=np.float64)


def eigenmode_ode_solution(
    mu: float, p: OperatorParams, t: float | FloatArray, order: int = 0
) -> float | FloatArray:
    """Time factor T(t) (or its derivative) of the mode with spatial eigenvalue mu"""
    if mu < 0:
        raise DomainError(f"spatial eigenvalue must be >= 0, got {mu}")
    if np.any(np.asarray(t) < 0):
        raise DomainError("eigenmode time factor needs t >= 0")
    k = p.epsilon * mu + p.a
    return damped_oscillator(k + p.beta, p.b + p.beta * k, 1.0, -k, t, order)


def mode_eigenvalue(n: int, d: StripDomain) -> float:
    """(n pi / L)^2"""
    return (n * math.pi / d.L) ** 2


def eigenmode_field(n: int, p: OperatorParams, d: StripDomain, nx: int, nt: int) -> SpaceTimeField:
    """T(t) sin(n pi x / L) sampled on the grid"""
    x = np.linspace(0.0, d.L, nx)
    t = np.linspace(0.0, d.T, nt)
    factor = np.asarray(eigenmode_ode_solution(mode_eigenvalue(n, d), p, t))
    values = np.sin(n * math.pi * x / d.L)[:, np.newaxis] * factor[np.newaxis, :]
    return SpaceTimeField(values, d, {"source": f"eigenmode n={n}"})
