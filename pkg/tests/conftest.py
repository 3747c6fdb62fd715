"""Shared parameter sets and numerics settings"""

import pytest

from solvers.params import (
    NumericsConfig,
    OperatorParams,
    QuadratureConfig,
    SeriesConfig,
    StripDomain,
)


@pytest.fixture
def standard_params() -> OperatorParams:
    """eps = 1, a = 1, b = 1, beta = 2"""
    return OperatorParams(epsilon=1.0, a=1.0, b=1.0, beta=2.0)


@pytest.fixture
def memoryless_params() -> OperatorParams:
    """b = 0: the kernel is a damped heat kernel"""
    return OperatorParams(epsilon=1.0, a=0.5, b=0.0, beta=1.0)


@pytest.fixture
def unit_strip() -> StripDomain:
    return StripDomain(L=1.0, T=1.0)


@pytest.fixture
def quick_numerics() -> NumericsConfig:
    return NumericsConfig(
        quadrature=QuadratureConfig(tol=1e-10),
        series=SeriesConfig(tol=1e-12),
        panel_tol=1e-8,
    )
