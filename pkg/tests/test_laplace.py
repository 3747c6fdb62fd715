import math

import numpy as np
import pytest

from oracles.eigenmode import eigenmode_ode_solution
from oracles.laplace import choose_horizon, exponential_tail, laplace_invert_contour, numerical_laplace
from solvers.params import OperatorParams
from utils.errors import AccuracyError, DomainError


def test_transform_of_exponential() -> None:
    result = numerical_laplace(lambda t: math.exp(-t), 2.0)
    assert complex(result.value) == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert not result.inconclusive
    assert result.tail <= 1e-10


def test_transform_with_inverse_square_root_singularity() -> None:
    result = numerical_laplace(lambda t: 1.0 / math.sqrt(t), 2.0)
    assert complex(result.value) == pytest.approx(math.sqrt(math.pi / 2.0), abs=1e-8)


def test_transform_is_elementwise_for_vector_functions() -> None:
    result = numerical_laplace(lambda t: np.array([math.exp(-t), 1.0]), 1.0 + 1.0j)
    expected = np.array([1.0 / (2.0 + 1.0j), 1.0 / (1.0 + 1.0j)])
    np.testing.assert_allclose(result.value, expected, atol=1e-9)


def test_short_horizon_is_flagged() -> None:
    result = numerical_laplace(lambda t: 1.0, 2.0, T_max=1.0)
    assert result.inconclusive
    assert result.error >= result.tail == pytest.approx(math.exp(-2.0) / 2.0)


def test_left_half_plane_needs_a_tail_bound() -> None:
    with pytest.raises(DomainError):
        numerical_laplace(lambda t: 1.0, -1.0)
    with pytest.raises(DomainError):
        exponential_tail(-1.0 + 0j)


def test_horizon_doubles_until_the_tail_is_small() -> None:
    horizon = choose_horizon(exponential_tail(1.0 + 0j), 1e-6)
    assert math.exp(-horizon) <= 1e-7
    assert math.exp(-horizon / 2.0) > 1e-7


def test_contour_inversion_of_simple_pole() -> None:
    assert laplace_invert_contour(lambda s: 1.0 / (s + 1.0), 1.0) == pytest.approx(math.exp(-1.0), abs=1e-10)


def test_contour_inversion_reports_disagreement() -> None:
    # the 32-node contour for t = 1 crosses the real axis at 12.8
    with pytest.raises(AccuracyError):
        laplace_invert_contour(lambda s: 1.0 / (s - 12.7), 1.0, node_count=32)


def test_contour_inversion_arguments() -> None:
    with pytest.raises(DomainError):
        laplace_invert_contour(lambda s: 1.0 / s, 0.0)
    with pytest.raises(DomainError):
        laplace_invert_contour(lambda s: 1.0 / s, 1.0, node_count=3)


def test_inverted_resolvent_matches_eigenmode_time_factor(standard_params: OperatorParams) -> None:
    p = standard_params
    mu = math.pi**2
    k = p.epsilon * mu + p.a

    def transform(s: np.ndarray) -> np.ndarray:
        return 1.0 / (s + k + p.b / (s + p.beta))

    value = laplace_invert_contour(transform, 0.5)
    assert value == pytest.approx(eigenmode_ode_solution(mu, p, 0.5), abs=1e-9)


PAIRS = {
    "step": (lambda t: 1.0, lambda s: 1.0 / s),
    "exponential": (lambda t: math.exp(-0.7 * t), lambda s: 1.0 / (s + 0.7)),
    "ramp": (lambda t: t * math.exp(-0.7 * t), lambda s: 1.0 / (s + 0.7) ** 2),
}


@pytest.mark.parametrize("name", PAIRS.keys())
def test_forward_and_inverse_transforms_agree(name: str) -> None:
    f, F_hat = PAIRS[name]
    for t in (0.5, 1.0, 2.0):
        assert laplace_invert_contour(F_hat, t) == pytest.approx(f(t), abs=1e-7)
    for s in (1.0, 3.0):
        assert complex(numerical_laplace(f, s).value) == pytest.approx(F_hat(s), abs=1e-7)
