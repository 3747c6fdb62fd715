import math

import numpy as np
import pytest

from oracles.eigenmode import eigenmode_field
from oracles.finite_difference import FdGrid, fd_solve_integro
from solvers.green import (
    boundary_term,
    decay_study,
    fit_decay_rate,
    green_dirichlet,
    initial_term,
    resolvent_solution_hat,
    solve_linear_dirichlet,
    volume_term,
)
from solvers.kernel import sigma
from solvers.params import NumericsConfig, OperatorParams, StripDomain
from solvers.problem import ProblemSpec
from utils.errors import DomainError


def sine_mode(x: np.ndarray) -> np.ndarray:
    return np.sin(math.pi * x)


def sin_time(t: np.ndarray) -> np.ndarray:
    return np.sin(t)


def pulse(t: np.ndarray) -> np.ndarray:
    return np.where(t < 1.0, np.sin(math.pi * t) ** 2, 0.0)


def test_memoryless_eigenmode(
    memoryless_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    spec = ProblemSpec(unit_strip, memoryless_params, u0=sine_mode)
    field = solve_linear_dirichlet(spec, 5, 101, quick_numerics)
    assert field.sup_distance(eigenmode_field(1, memoryless_params, unit_strip, 5, 101)) < 1e-4


@pytest.mark.slow
def test_eigenmode_with_memory(
    standard_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    # early samples put the kernel close to its diagonal
    spec = ProblemSpec(unit_strip, standard_params, u0=sine_mode)
    field = solve_linear_dirichlet(spec, 5, 101, quick_numerics)
    assert field.sup_distance(eigenmode_field(1, standard_params, unit_strip, 5, 101)) < 1e-4


def test_left_boundary_data_are_attained(memoryless_params: OperatorParams, quick_numerics) -> None:
    spec = ProblemSpec(StripDomain(L=1.0, T=3.0), memoryless_params, g1=sin_time)
    t = np.array([0.5, 1.5, 3.0])
    near_edge = boundary_term(np.full_like(t, 1e-3), t, spec, quick_numerics)
    np.testing.assert_allclose(near_edge, np.sin(t), atol=5e-3)


def test_right_boundary_term_mirrors_left(memoryless_params: OperatorParams, quick_numerics) -> None:
    domain = StripDomain(L=1.0, T=1.0)
    left = ProblemSpec(domain, memoryless_params, g1=sin_time)
    right = ProblemSpec(domain, memoryless_params, g2=sin_time)
    value_left = boundary_term(0.3, 0.8, left, quick_numerics)
    value_right = boundary_term(0.7, 0.8, right, quick_numerics)
    assert float(value_right) == pytest.approx(float(value_left), rel=1e-7)


def test_initial_data_are_attained(
    memoryless_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    spec = ProblemSpec(unit_strip, memoryless_params, u0=sine_mode)
    value = initial_term(0.5, 1e-4, spec, quick_numerics)
    assert float(value) == pytest.approx(1.0, abs=2e-3)


def test_volume_term_of_a_manufactured_source(
    memoryless_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    # u = t sin(pi x) has zero initial and boundary data
    rate = memoryless_params.epsilon * math.pi**2 + memoryless_params.a

    def source(x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return np.sin(math.pi * x) * (1.0 + rate * t)

    spec = ProblemSpec(unit_strip, memoryless_params, source=source)
    value = volume_term(np.array([0.3, 0.5]), 0.5, spec, quick_numerics)
    np.testing.assert_allclose(value, 0.5 * np.sin(math.pi * np.array([0.3, 0.5])), atol=1e-6)


def test_green_function_vanishes_on_the_edges(
    standard_params: OperatorParams, unit_strip: StripDomain
) -> None:
    spec = ProblemSpec(unit_strip, standard_params)
    xi = np.array([0.2, 0.5, 0.9])
    values = green_dirichlet(np.array([[0.0], [1.0]]), xi, np.array(0.4), spec, NumericsConfig())
    assert np.all(np.abs(values) < 1e-10)


def test_representation_is_interior_only(memoryless_params: OperatorParams, unit_strip: StripDomain) -> None:
    spec = ProblemSpec(unit_strip, memoryless_params, u0=sine_mode)
    with pytest.raises(DomainError):
        initial_term(0.0, 0.5, spec, NumericsConfig())
    with pytest.raises(DomainError):
        initial_term(0.5, 0.0, spec, NumericsConfig())


def test_nonlinear_problem_is_refused(memoryless_params: OperatorParams, unit_strip: StripDomain) -> None:
    spec = ProblemSpec(unit_strip, memoryless_params, reaction=lambda x, t, u: np.sin(u))
    with pytest.raises(DomainError):
        solve_linear_dirichlet(spec, 5, 5)


@pytest.mark.slow
def test_green_solution_agrees_with_finite_differences(
    standard_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    spec = ProblemSpec(
        unit_strip,
        standard_params,
        u0=lambda x: x * (1.0 - x),
        g1=sin_time,
        source=lambda x, t: np.ones_like(x + t),
    )
    green = solve_linear_dirichlet(spec, 5, 5, quick_numerics)
    fd = fd_solve_integro(spec, FdGrid.for_domain(unit_strip, 101, 5, standard_params.epsilon))
    assert green.sup_distance(fd) <= 5e-3


def test_resolvent_reproduces_constant_boundary_data(
    standard_params: OperatorParams, unit_strip: StripDomain
) -> None:
    spec = ProblemSpec(unit_strip, standard_params, g1=lambda t: np.ones_like(t))
    s = 2.0 + 0j
    assert resolvent_solution_hat(0.0, s, spec) == pytest.approx(1.0 / s, rel=1e-6)


def test_resolvent_of_an_eigenmode(
    standard_params: OperatorParams, unit_strip: StripDomain
) -> None:
    spec = ProblemSpec(unit_strip, standard_params, u0=sine_mode)
    s = 2.0 + 0j
    expected = math.sin(0.5 * math.pi) / (complex(sigma(s, standard_params)) ** 2 + math.pi**2)
    assert resolvent_solution_hat(0.5, s, spec) == pytest.approx(expected, rel=1e-6)


def test_resolvent_needs_a_point_in_the_strip(
    standard_params: OperatorParams, unit_strip: StripDomain
) -> None:
    with pytest.raises(DomainError):
        resolvent_solution_hat(1.5, 2.0 + 0j, ProblemSpec(unit_strip, standard_params))


def test_decay_rate_fit_on_exact_exponential() -> None:
    times = np.linspace(1.0, 10.0, 12)
    assert fit_decay_rate(times, 3.0 * np.exp(-0.7 * times)) == pytest.approx(0.7)
    assert fit_decay_rate(times, np.zeros_like(times)) is None


def test_memoryless_decay_study(memoryless_params: OperatorParams, quick_numerics) -> None:
    spec = ProblemSpec(StripDomain(L=5.0, T=1.0), memoryless_params, g1=pulse, boundary_support=1.0)
    report = decay_study(spec, 10.0, quick_numerics, samples=12, nx=21)
    assert report.rate is not None
    assert report.rate >= memoryless_params.a
    again = decay_study(spec, 10.0, quick_numerics, samples=12, nx=21)
    np.testing.assert_array_equal(report.sup_values, again.sup_values)


def test_decay_study_preconditions(memoryless_params: OperatorParams) -> None:
    domain = StripDomain(L=5.0, T=1.0)
    with pytest.raises(DomainError):
        decay_study(ProblemSpec(domain, memoryless_params, g1=pulse), 10.0)
    with pytest.raises(DomainError):
        spec = ProblemSpec(domain, memoryless_params, u0=sine_mode, g1=pulse, boundary_support=1.0)
        decay_study(spec, 10.0)
    with pytest.raises(DomainError):
        decay_study(ProblemSpec(domain, memoryless_params, g1=pulse, boundary_support=1.0), 0.5)


@pytest.mark.slow
def test_decay_with_memory_is_positive_and_reproducible(quick_numerics) -> None:
    p = OperatorParams(epsilon=1.0, a=0.5, b=0.2, beta=5.0)
    spec = ProblemSpec(StripDomain(L=3.0, T=1.0), p, g1=pulse, boundary_support=1.0)
    report = decay_study(spec, 6.0, quick_numerics, samples=8, nx=13)
    again = decay_study(spec, 6.0, quick_numerics, samples=8, nx=13)
    assert report.rate is not None and report.rate > 0
    np.testing.assert_array_equal(report.sup_values, again.sup_values)


def test_solutions_superpose(
    memoryless_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    def parabola(x: np.ndarray) -> np.ndarray:
        return x * (1.0 - x)

    def ones(x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return np.ones_like(x + t)

    first = ProblemSpec(unit_strip, memoryless_params, u0=sine_mode, g1=sin_time)
    second = ProblemSpec(unit_strip, memoryless_params, u0=parabola, g2=sin_time, source=ones)
    both = ProblemSpec(
        unit_strip,
        memoryless_params,
        u0=lambda x: sine_mode(x) + parabola(x),
        g1=sin_time,
        g2=sin_time,
        source=ones,
    )
    fields = [solve_linear_dirichlet(spec, 5, 5, quick_numerics) for spec in (first, second, both)]
    combined = fields[0].values + fields[1].values
    assert float(np.max(np.abs(fields[2].values - combined))) <= 2.0 * quick_numerics.panel_tol


@pytest.mark.slow
def test_distance_to_finite_differences_shrinks_fourfold(
    standard_params: OperatorParams, unit_strip: StripDomain, quick_numerics
) -> None:
    spec = ProblemSpec(
        unit_strip,
        standard_params,
        u0=lambda x: x * (1.0 - x),
        g1=sin_time,
        source=lambda x, t: np.ones_like(x + t),
    )
    green = solve_linear_dirichlet(spec, 5, 5, quick_numerics)
    grids = [FdGrid.for_domain(unit_strip, nx, 5, standard_params.epsilon) for nx in (101, 201)]
    distances = [green.sup_distance(fd_solve_integro(spec, grid)) for grid in grids]
    assert distances[0] <= 5e-3
    assert 3.0 <= distances[0] / distances[1] <= 5.0
