import logging
import math

import mpmath
import numpy as np
import pytest

from numerics.bessel import BesselAccuracy, bessel_j0, bessel_j1
from utils.errors import DomainError

POINTS = [0.0, 1e-8, 0.5, 1.0, 2.404825557695773, 3.8317, 4.9, 5.0, 5.1, 7.5, 12.0, 30.0, 100.0, 1000.0]


def reference(order: int, x: float) -> float:
    return float(mpmath.besselj(order, mpmath.mpf(x)))


@pytest.mark.parametrize("x", POINTS)
def test_j0_matches_extended_precision(x: float) -> None:
    ref = reference(0, x)
    assert bessel_j0(x) == pytest.approx(ref, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("x", POINTS)
def test_j1_matches_extended_precision(x: float) -> None:
    ref = reference(1, x)
    assert bessel_j1(x) == pytest.approx(ref, rel=1e-12, abs=1e-14)


def test_values_at_origin() -> None:
    assert bessel_j0(0.0) == 1.0
    assert bessel_j1(0.0) == 0.0


def test_parity() -> None:
    x = np.linspace(0.1, 40.0, 57)
    np.testing.assert_array_equal(bessel_j0(-x), bessel_j0(x))
    np.testing.assert_array_equal(bessel_j1(-x), -bessel_j1(x))


def test_vectorized_agrees_with_scalar() -> None:
    x = np.array([0.3, 4.99, 5.01, 17.0])
    batch = bessel_j1(x)
    assert isinstance(batch, np.ndarray)
    for xi, value in zip(x, batch, strict=True):
        assert value == bessel_j1(float(xi))


def test_scalar_input_returns_float() -> None:
    assert isinstance(bessel_j0(2.0), float)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_argument_is_rejected(bad: float) -> None:
    with pytest.raises(DomainError):
        bessel_j0(bad)
    with pytest.raises(DomainError):
        bessel_j1(np.array([1.0, bad]))


def test_large_argument_warns(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="greenstrip"):
        value = bessel_j0(2e4)
    assert math.isfinite(value)
    assert "accuracy reduced" in caplog.text


def test_wider_series_range_keeps_accuracy() -> None:
    accuracy = BesselAccuracy(series_cutoff=12.0)
    for x in (6.0, 9.5, 11.9):
        assert bessel_j1(x, accuracy) == pytest.approx(reference(1, x), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("cutoff", [4.0, 13.0])
def test_series_cutoff_outside_fit_range_is_rejected(cutoff: float) -> None:
    with pytest.raises(DomainError):
        BesselAccuracy(series_cutoff=cutoff)
