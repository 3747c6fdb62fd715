import math
from pathlib import Path

import numpy as np
import pytest

from runners.profiles import parse_profile
from runners.scenario import DEFAULTS, apply_override, build_scenario, parse_scenario, read_settings
from utils.errors import ScenarioError


def write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def test_minimal_scenario_fills_defaults(tmp_path: Path) -> None:
    scenario = parse_scenario(write(tmp_path / "k.ini", "scenario.kind = kernel-validate\n"))
    assert scenario.kind == "kernel-validate"
    assert scenario.operator is not None and scenario.operator.epsilon == 1.0
    assert scenario.junction is None
    assert (scenario.nx, scenario.nt) == (21, 11)
    assert scenario.r_set == (0.5, 1.0, 2.0)
    assert scenario.s_set == (1.0, 2.0, 5.0)
    assert scenario.numerics.picard.adaptive_window
    assert set(scenario.settings) == set(DEFAULTS)


def test_comments_and_blank_lines_are_ignored() -> None:
    raw = read_settings(["# a comment", "", "scenario.kind = solve-linear  # trailing", "grid.nx = 9"])
    assert raw == {"scenario.kind": "solve-linear", "grid.nx": "9"}


@pytest.mark.parametrize(
    "lines, key",
    [
        (["scenario.kind = solve-linear", "operator.mu = 1"], "operator.mu"),
        (["scenario.kind = solve-linear", "grid.nx = 9", "grid.nx = 11"], "grid.nx"),
        (["scenario.kind solve-linear"], "line 1"),
    ],
)
def test_malformed_lines_name_the_key(lines: list[str], key: str) -> None:
    with pytest.raises(ScenarioError) as info:
        read_settings(lines)
    assert info.value.key == key


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"scenario.kind": "solve-linear", "operator.epsilon": "-1"}, "operator.epsilon"),
        ({"scenario.kind": "solve-linear", "junction.alpha": "1"}, "junction"),
        ({"scenario.kind": "solve-esjj", "operator.a": "1"}, "operator"),
        ({"scenario.kind": "heat"}, "scenario.kind"),
        ({"scenario.kind": "solve-linear", "grid.nx": "4"}, "grid.nx"),
        ({"scenario.kind": "solve-linear", "domain.T": "nan"}, "domain.T"),
        ({"scenario.kind": "kernel-validate", "validate.s": "1,-2"}, "validate.s"),
        ({"scenario.kind": "equivalence-check", "equivalence.levels": "201,101"}, "equivalence.levels"),
        ({"scenario.kind": "equivalence-check", "equivalence.t_min": "1"}, "equivalence.t_min"),
        ({"scenario.kind": "solve-linear", "data.u0": "gauss:1"}, "data.u0"),
        ({"scenario.kind": "decay-study", "decay.fd_check": "maybe"}, "decay.fd_check"),
    ],
)
def test_invalid_values_name_the_key(raw: dict[str, str], key: str) -> None:
    with pytest.raises(ScenarioError) as info:
        build_scenario(raw)
    assert info.value.key == key


def test_overrides_replace_file_values(tmp_path: Path) -> None:
    path = write(tmp_path / "s.ini", "scenario.kind = solve-linear\ngrid.nx = 9\n")
    scenario = parse_scenario(path, ["grid.nx=17", "picard.window = 0.25"])
    assert scenario.nx == 17
    assert scenario.numerics.picard.window == 0.25
    assert not scenario.numerics.picard.adaptive_window
    with pytest.raises(ScenarioError):
        apply_override({}, "grid.nx")


def test_missing_file_is_an_os_error(tmp_path: Path) -> None:
    with pytest.raises(OSError):
        parse_scenario(tmp_path / "absent.ini")


def test_junction_scenario(tmp_path: Path) -> None:
    text = "scenario.kind = equivalence-check\njunction.lambda = 0.5\nequivalence.levels = 21, 41\n"
    scenario = parse_scenario(write(tmp_path / "j.ini", text))
    assert scenario.operator is None
    assert scenario.junction is not None and scenario.junction.lam == 0.5
    assert scenario.levels == (21, 41)
    assert scenario.t_min == 0.1


def test_problem_uses_pulse_support(tmp_path: Path) -> None:
    text = "scenario.kind = decay-study\ndata.g1 = pulse:0,1,1\n"
    spec = parse_scenario(write(tmp_path / "d.ini", text)).problem()
    assert spec.boundary_support == 1.0
    assert spec.source is None
    assert spec.is_linear


def test_finite_difference_check_flag(tmp_path: Path) -> None:
    text = "scenario.kind = decay-study\ndata.g1 = pulse:0,1,1\ndecay.fd_check = Yes\n"
    assert parse_scenario(write(tmp_path / "d.ini", text)).fd_check is True
    assert not parse_scenario(write(tmp_path / "d.ini", "scenario.kind = decay-study\n")).fd_check


def test_profiles(tmp_path: Path) -> None:
    mode = parse_profile("data.u0", "eigenmode:2", tmp_path)
    assert mode.space(1.0)(np.array([0.25]))[0] == pytest.approx(1.0)
    pulse = parse_profile("data.g1", "pulse:0,1,2", tmp_path)
    np.testing.assert_allclose(pulse.time(1.0)(np.array([0.5, 1.5])), [2.0, 0.0], atol=1e-15)
    assert pulse.support_end == 1.0
    sine = parse_profile("data.g1", "sine:2,3", tmp_path)
    slope = sine.derivative(1.0, 1)
    assert slope is not None
    assert slope(np.array([0.0]))[0] == pytest.approx(6.0)
    assert parse_profile("data.f", "zero", tmp_path).source(1.0) is None
    source = parse_profile("data.f", "sine:1,1", tmp_path).source(1.0)
    assert source is not None
    assert source(np.array([0.5]), np.array([3.0]))[0] == pytest.approx(math.sin(0.5))


def test_table_profile_with_header(tmp_path: Path) -> None:
    write(tmp_path / "g.csv", "t,value\n0,0\n1,2\n")
    profile = parse_profile("data.g1", "table:g.csv", tmp_path)
    assert profile.time(1.0)(np.array([0.5]))[0] == pytest.approx(1.0)
    assert profile.derivative(1.0, 1) is None


@pytest.mark.parametrize("text", ["pulse:1,0,1", "sine:1", "eigenmode:x", "table:", "table:missing.csv"])
def test_bad_profiles(tmp_path: Path, text: str) -> None:
    with pytest.raises((ScenarioError, OSError)):
        parse_profile("data.g1", text, tmp_path)


def test_short_table_is_rejected(tmp_path: Path) -> None:
    write(tmp_path / "one.csv", "0,1\n")
    with pytest.raises(ScenarioError):
        parse_profile("data.g1", "table:one.csv", tmp_path)
