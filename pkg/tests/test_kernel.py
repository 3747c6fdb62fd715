import math

import mpmath
import numpy as np
import pytest

from oracles.laplace import laplace_invert_contour
from solvers.kernel import (
    KernelVariant,
    adjudicate_kernel_form,
    kernel_bound,
    kernel_K,
    kernel_K_dx,
    kernel_laplace_closed,
    sigma,
    validate_kernel_laplace,
)
from solvers.params import OperatorParams
from utils.errors import DomainError, PoleError


def heat_kernel(x: float, t: float, p: OperatorParams) -> float:
    return math.exp(-x * x / (4.0 * p.epsilon * t) - p.a * t) / (2.0 * math.sqrt(math.pi * p.epsilon * t))


def reference_kernel(x: float, t: float, p: OperatorParams) -> float:
    """Extended-precision quadrature of the root-coupling form"""
    r2 = mpmath.mpf(x) ** 2 / p.epsilon
    end = mpmath.mpf(t)

    def memory(y: mpmath.mpf) -> mpmath.mpf:
        lag = end - y
        bessel = mpmath.besselj(1, 2 * mpmath.sqrt(p.b * y * lag))
        return mpmath.exp(-r2 / (4 * y) - p.a * y - p.beta * lag) * bessel / mpmath.sqrt(lag)

    lead = mpmath.exp(-r2 / (4 * end) - p.a * end) / mpmath.sqrt(end)
    value = lead - mpmath.sqrt(p.b) * mpmath.quad(memory, [0, end / 2, end])
    return float(value / (2 * mpmath.sqrt(mpmath.pi * p.epsilon)))


def test_memoryless_kernel_is_damped_heat_kernel(memoryless_params: OperatorParams) -> None:
    for x, t in ((0.0, 0.1), (0.4, 0.3), (-1.5, 2.0)):
        expected = heat_kernel(x, t, memoryless_params)
        assert kernel_K(x, t, memoryless_params) == pytest.approx(expected, rel=1e-12)


def test_kernel_is_even_and_broadcasts(standard_params: OperatorParams) -> None:
    x = np.array([-0.8, 0.8])
    values = kernel_K(x, 0.6, standard_params)
    assert values.shape == (2,)
    assert values[0] == pytest.approx(values[1], rel=1e-14)


def test_memory_lowers_the_kernel(standard_params: OperatorParams) -> None:
    free = OperatorParams(standard_params.epsilon, standard_params.a, 0.0, standard_params.beta)
    assert kernel_K(0.5, 1.0, standard_params) < kernel_K(0.5, 1.0, free)


def test_derivative_matches_difference_quotient(standard_params: OperatorParams) -> None:
    x, t, h = 0.7, 0.5, 1e-3
    quotient = (kernel_K(x + h, t, standard_params) - kernel_K(x - h, t, standard_params)) / (2.0 * h)
    assert kernel_K_dx(x, t, standard_params) == pytest.approx(quotient, rel=1e-5)


def test_derivative_is_odd_and_vanishes_at_origin(standard_params: OperatorParams) -> None:
    assert kernel_K_dx(0.0, 0.4, standard_params) == 0.0
    assert kernel_K_dx(-0.3, 0.4, standard_params) == pytest.approx(-kernel_K_dx(0.3, 0.4, standard_params))


def test_kernel_bound_dominates(standard_params: OperatorParams) -> None:
    x = np.array([0.0, 0.3, 1.0, 2.5])
    for t in (0.05, 0.5, 3.0):
        bound = kernel_bound(x, np.full_like(x, t), standard_params)
        assert np.all(np.abs(kernel_K(x, t, standard_params)) <= bound)


def test_kernel_requires_positive_time(standard_params: OperatorParams) -> None:
    with pytest.raises(DomainError):
        kernel_K(0.1, 0.0, standard_params)


def test_kernel_requires_non_negative_coefficients() -> None:
    with pytest.raises(DomainError):
        kernel_K(0.1, 1.0, OperatorParams(epsilon=0.3, a=-9.0, b=95.0, beta=1.0 / 0.3))


def test_sigma_pole_and_half_plane(standard_params: OperatorParams) -> None:
    with pytest.raises(PoleError):
        sigma(-2.0 + 0j, standard_params, check_abscissa=False)
    with pytest.raises(DomainError):
        sigma(-1.5 + 0j, standard_params)
    assert sigma(2.0 + 0j, standard_params) == pytest.approx(math.sqrt(3.25))


def test_closed_transform_at_origin(standard_params: OperatorParams) -> None:
    sig = sigma(1.0 + 0j, standard_params)
    assert kernel_laplace_closed(0.0, 1.0 + 0j, standard_params) == pytest.approx(1.0 / (2.0 * sig))


def test_memoryless_transform_matches_closed_form(memoryless_params: OperatorParams) -> None:
    report = validate_kernel_laplace([0.5, 1.0], [1.0, 2.0], memoryless_params)
    assert len(report.rows) == 4
    assert report.passed(1e-4)
    assert not report.inconclusive


def test_empty_sets_give_empty_report(standard_params: OperatorParams) -> None:
    report = validate_kernel_laplace([], [1.0], standard_params)
    assert report.rows == []
    assert report.max_rel_error == 0.0


def test_points_near_abscissa_are_refused(standard_params: OperatorParams) -> None:
    with pytest.raises(DomainError):
        validate_kernel_laplace([1.0], [-0.8], standard_params)


def test_report_csv_layout(tmp_path, memoryless_params: OperatorParams) -> None:
    report = validate_kernel_laplace([1.0], [2.0], memoryless_params)
    path = tmp_path / "report.csv"
    report.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "r,s,closed,numeric,rel_err"
    assert len(lines) == 2


@pytest.mark.slow
def test_standard_validation_set(standard_params: OperatorParams) -> None:
    report = validate_kernel_laplace([0.5, 1.0, 2.0], [1.0, 2.0, 5.0], standard_params)
    assert report.max_rel_error < 1e-4


@pytest.mark.slow
def test_adjudication_selects_root_coupling() -> None:
    p = OperatorParams(epsilon=1.0, a=1.0, b=4.0, beta=2.0)
    outcome = adjudicate_kernel_form([1.0], [2.0], p)
    assert KernelVariant.ROOT_COUPLING in outcome.passing
    assert KernelVariant.PRINTED not in outcome.passing


@pytest.mark.parametrize("x, t", [(0.0, 1.0), (0.0, 0.2), (0.01, 0.2), (0.3, 0.05), (1.0, 2.0)])
def test_kernel_near_the_diagonal_matches_extended_precision(
    x: float, t: float, standard_params: OperatorParams
) -> None:
    assert kernel_K(x, t, standard_params) == pytest.approx(reference_kernel(x, t, standard_params), rel=1e-9)


def test_strong_memory_kernel_matches_extended_precision() -> None:
    p = OperatorParams(epsilon=0.5, a=0.3, b=4.0, beta=1.5)
    assert kernel_K(0.0, 3.0, p) == pytest.approx(reference_kernel(0.0, 3.0, p), rel=1e-9, abs=1e-10)


def test_inverted_closed_transform_is_the_kernel(standard_params: OperatorParams) -> None:
    def transform(s: np.ndarray) -> np.ndarray:
        return np.asarray(kernel_laplace_closed(1.0, s, standard_params, check_abscissa=False))

    value = laplace_invert_contour(transform, 1.0)
    assert value == pytest.approx(kernel_K(1.0, 1.0, standard_params), abs=1e-6)
