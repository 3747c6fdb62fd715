import numpy as np
import pytest

from solvers.field import SpaceTimeField, field_from_function
from solvers.params import StripDomain
from utils.errors import DataError, DomainError


def test_nested_grids_compare_on_shared_nodes(unit_strip: StripDomain) -> None:
    coarse = field_from_function(lambda x, t: x * t, unit_strip, 5, 3, "coarse")
    fine = field_from_function(lambda x, t: x * t + 0.01 * np.sin(40.0 * np.pi * x), unit_strip, 9, 5, "fine")
    assert coarse.sup_distance(fine) == pytest.approx(0.0, abs=1e-15)
    assert fine.sup_distance(coarse) == coarse.sup_distance(fine)


def test_grids_that_do_not_nest_are_refused(unit_strip: StripDomain) -> None:
    a = field_from_function(lambda x, t: x + t, unit_strip, 5, 3, "a")
    b = field_from_function(lambda x, t: x + t, unit_strip, 7, 3, "b")
    with pytest.raises(DomainError):
        a.sup_distance(b)


def test_csv_is_time_major(tmp_path, unit_strip: StripDomain) -> None:
    field = field_from_function(lambda x, t: x + 10.0 * t, unit_strip, 3, 2, "ramp")
    path = tmp_path / "field.csv"
    field.to_csv(path)
    assert path.read_text().splitlines() == [
        "x,t,u",
        "0,0,0",
        "0.5,0,0.5",
        "1,0,1",
        "0,1,10",
        "0.5,1,10.5",
        "1,1,11",
    ]


def test_values_must_be_finite(unit_strip: StripDomain) -> None:
    with pytest.raises(DataError):
        SpaceTimeField(np.full((3, 2), np.nan), unit_strip)
    with pytest.raises(DomainError):
        SpaceTimeField(np.zeros(4), unit_strip)


def test_with_values_keeps_the_grid(unit_strip: StripDomain) -> None:
    field = field_from_function(lambda x, t: x + t, unit_strip, 5, 3, "base")
    doubled = field.with_values(2.0 * field.values, "doubled")
    assert doubled.metadata["source"] == "doubled"
    assert (doubled.nx, doubled.nt, doubled.hx, doubled.ht) == (5, 3, 0.25, 0.5)
