"""Quick built-in acceptance checks, one PASS/FAIL line each"""

import math
import sys
from collections.abc import Callable
from typing import TextIO

import numpy as np

from junction.equivalence import map_params
from junction.params import JunctionParams
from numerics.bessel import bessel_j0, bessel_j1
from oracles.eigenmode import damped_oscillator
from oracles.laplace import laplace_invert_contour
from runners.base import Check
from solvers.kernel import validate_kernel_laplace
from solvers.nonlinear import esjj_source
from solvers.params import OperatorParams, QuadratureConfig, StripDomain
from solvers.theta import theta_hat, theta_hat_series
from utils.errors import GreenStripError
from utils.logger import logger

SEED = 20240611


def check_bessel() -> Check:
    errors = [
        abs(bessel_j0(1.0) - 0.7651976865579666) / 0.7651976865579666,
        abs(bessel_j1(1.0) - 0.44005058574493355) / 0.44005058574493355,
        abs(bessel_j0(10.0) - (-0.2459357644513483)) / 0.2459357644513483,
    ]
    worst = max(errors)
    return Check("Bessel reference values", worst < 1e-13, f"max rel error {worst:.2e}")


def check_parameter_map() -> Check:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        j = JunctionParams(
            epsilon=float(rng.uniform(0.05, 5.0)),
            alpha=float(rng.uniform(0.0, 2.0)),
            lam=float(rng.uniform(-2.0, 2.0)),
            gamma=float(rng.uniform(-1.0, 1.0)),
        )
        p = map_params(j).params
        eps = j.epsilon
        sides = (
            (p.a + 1.0 / eps, j.alpha + eps * j.lam**2 / 4.0, max(abs(p.a), 1.0 / eps)),
            (p.b + p.a / eps, j.lam**2 / 4.0, max(abs(p.b), abs(p.a / eps))),
            (p.beta * eps, 1.0, 1.0),
        )
        for left, right, scale in sides:
            worst = max(worst, abs(left - right) / math.ulp(scale))
    return Check("parameter map identities", worst <= 4.0, f"max {worst:.1f} ulps")


def check_source_identity() -> Check:
    eps = 0.3
    rng = np.random.default_rng(SEED)
    amps = rng.uniform(-1.0, 1.0, 3)
    freqs = rng.uniform(0.5, 3.0, 3)
    profiles: dict[str, Callable[[float], float]] = {
        "constant": lambda tau: 0.7,
        "exponential": lambda tau: math.exp(-tau),
        "smooth random": lambda tau: float(np.sum(amps * np.sin(freqs * tau))),
    }
    q = QuadratureConfig(tol=1e-13)
    h = 1e-4
    t = 0.8
    worst = 0.0
    for f1 in profiles.values():

        def history(x: np.ndarray, tau: np.ndarray, f1: Callable[[float], float] = f1) -> np.ndarray:
            return np.full_like(np.asarray(x, dtype=np.float64), f1(float(np.ravel(tau)[0])))

        F = [float(esjj_source(history, eps, tt, 0.5, q)[0]) for tt in (t - h, t, t + h)]
        F_t = (F[2] - F[0]) / (2.0 * h)
        worst = max(worst, abs(F_t + F[1] / eps + f1(t)))
    return Check("memory source identity", worst < 1e-6, f"max defect {worst:.2e}")


def check_theta_closed_form() -> Check:
    p = OperatorParams(epsilon=1.0, a=1.0, b=1.0, beta=2.0)
    d = StripDomain(L=1.0, T=1.0)
    worst = 0.0
    for y, sig in ((0.2, 1.5 + 0j), (0.9, 2.0 + 0.5j), (1.6, 0.8 - 0.3j)):
        closed = complex(theta_hat(y, sig, d, p))
        series, _ = theta_hat_series(y, sig, d, p)
        worst = max(worst, abs(series - closed) / abs(closed))
    return Check("transformed theta closed form", worst < 1e-10, f"max rel error {worst:.2e}")


def check_oscillator() -> Check:
    t = np.linspace(0.0, 3.0, 7)
    worst = 0.0
    for c1, c0 in ((3.0, 1.0), (2.0, 1.0), (1.0, 4.0)):
        residual = (
            np.asarray(damped_oscillator(c1, c0, 1.0, -0.5, t, 2))
            + c1 * np.asarray(damped_oscillator(c1, c0, 1.0, -0.5, t, 1))
            + c0 * np.asarray(damped_oscillator(c1, c0, 1.0, -0.5, t, 0))
        )
        worst = max(worst, float(np.max(np.abs(residual))))
    return Check("damped oscillator branches", worst < 1e-12, f"max residual {worst:.2e}")


def check_contour_inversion() -> Check:
    value = laplace_invert_contour(lambda s: 1.0 / (s + 1.0), 1.0)
    error = abs(value - math.exp(-1.0))
    return Check("contour inversion", error < 1e-8, f"error {error:.2e}")


def check_kernel_transform() -> Check:
    p = OperatorParams(epsilon=1.0, a=1.0, b=1.0, beta=2.0)
    report = validate_kernel_laplace([1.0], [2.0], p)
    return Check(
        "kernel transform", report.passed(1e-4), f"rel error {report.max_rel_error:.2e}"
    )


CHECKS: tuple[Callable[[], Check], ...] = (
    check_bessel,
    check_parameter_map,
    check_source_identity,
    check_theta_closed_form,
    check_oscillator,
    check_contour_inversion,
    check_kernel_transform,
)


def run_selftest(stream: TextIO | None = None) -> int:
    """Run every check, printing to ``stream`` (stdout by default); 0 when all pass"""
    out = stream if stream is not None else sys.stdout
    failures = 0
    for check_fn in CHECKS:
        try:
            check = check_fn()
        except GreenStripError as err:
            check = Check(check_fn.__name__.removeprefix("check_"), False, str(err))
        failures += not check.passed
        verdict = "PASS" if check.passed else "FAIL"
        out.write(f"{verdict} {check.name}" + (f": {check.detail}" if check.detail else "") + "\n")
    logger.info(f"selftest: {len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return 0 if failures == 0 else 1
