from pathlib import Path

import pytest

from main import main
from runners import RUNNERS
from runners.scenario import KINDS
from runners.selftest import run_selftest


def scenario_file(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "scenario.ini"
    path.write_text(text, encoding="utf-8")
    return path


def test_every_kind_has_a_runner() -> None:
    assert set(RUNNERS) == set(KINDS)


def test_zero_data_linear_run(tmp_path: Path) -> None:
    path = scenario_file(tmp_path, "scenario.kind = solve-linear\noperator.b = 1\n")
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out), "--grid", "5,5"]) == 0
    lines = (out / "field.csv").read_text().splitlines()
    assert lines[0] == "x,t,u"
    assert len(lines) == 26
    assert all(line.endswith(",0") for line in lines[1:])
    summary = (out / "summary.txt").read_text()
    assert "grid.nx = 5" in summary
    assert "PASS field assembled" in summary
    assert summary.endswith("result = PASS\n")
    assert (out / "plot_field.py").exists()


def test_reruns_are_byte_identical(tmp_path: Path) -> None:
    path = scenario_file(tmp_path, "scenario.kind = solve-linear\n")
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(path), "--out", str(first), "--grid", "5,5"]) == 0
    assert main(["run", str(path), "--out", str(second), "--grid", "5,5"]) == 0
    for name in ("field.csv", "summary.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_memoryless_kernel_validation_run(tmp_path: Path) -> None:
    text = (
        "scenario.kind = kernel-validate\n"
        "operator.a = 0.5\n"
        "validate.r = 1\n"
        "validate.s = 2\n"
    )
    out = tmp_path / "out"
    assert main(["run", str(scenario_file(tmp_path, text)), "--out", str(out)]) == 0
    report = (out / "report.csv").read_text().splitlines()
    assert report[0] == "r,s,closed,numeric,rel_err"
    assert len(report) == 2
    assert "kernel.rel_err: requested 0.0001" in (out / "summary.txt").read_text()


@pytest.mark.parametrize(
    "text",
    [
        "scenario.kind = solve-linear\noperator.epsilon = -1\n",
        "scenario.kind = solve-linear\njunction.alpha = 1\n",
        "scenario.kind = solve-linear\nunknown.key = 1\n",
    ],
)
def test_invalid_scenarios_exit_with_3(tmp_path: Path, text: str) -> None:
    out = tmp_path / "out"
    assert main(["run", str(scenario_file(tmp_path, text)), "--out", str(out)]) == 3
    assert not (out / "summary.txt").exists()


@pytest.mark.parametrize(
    "data",
    [
        "data.g1 = sine:1,2\n",
        "data.g1 = pulse:0,1,1\ndata.u0 = eigenmode:1\n",
        "data.g1 = pulse:0,1,1\ndecay.horizon = 0.5\n",
    ],
)
def test_decay_study_needs_a_lone_pulse(tmp_path: Path, data: str) -> None:
    path = scenario_file(tmp_path, "scenario.kind = decay-study\n" + data)
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out)]) == 3
    assert not (out / "summary.txt").exists()


@pytest.mark.slow
def test_decay_study_with_finite_difference_rate(tmp_path: Path) -> None:
    text = (
        "scenario.kind = decay-study\n"
        "operator.a = 0.5\n"
        "domain.L = 5\n"
        "data.g1 = pulse:0,1,1\n"
        "decay.fd_check = true\n"
    )
    out = tmp_path / "out"
    assert main(["run", str(scenario_file(tmp_path, text)), "--out", str(out)]) == 0
    summary = (out / "summary.txt").read_text()
    assert "PASS positive decay rate" in summary
    assert "PASS finite-difference rate agrees" in summary
    report = (out / "report.csv").read_text().splitlines()
    assert report[0] == "t,sup_boundary,sup_fd"
    assert len(report) == 13


def test_bad_grid_option_exits_with_3(tmp_path: Path) -> None:
    path = scenario_file(tmp_path, "scenario.kind = solve-linear\n")
    assert main(["run", str(path), "--out", str(tmp_path / "out"), "--grid", "5"]) == 3


def test_missing_scenario_exits_with_2(tmp_path: Path) -> None:
    assert main(["run", str(tmp_path / "absent.ini"), "--out", str(tmp_path / "out")]) == 2


def test_override_reaches_the_run(tmp_path: Path) -> None:
    path = scenario_file(tmp_path, "scenario.kind = solve-linear\n")
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out), "--grid", "5,5", "--override", "domain.T=2"]) == 0
    assert "domain.T = 2" in (out / "summary.txt").read_text()


@pytest.mark.slow
def test_selftest_passes(capsys) -> None:
    assert run_selftest() == 0
    printed = capsys.readouterr().out.splitlines()
    assert len(printed) == 7
    assert all(line.startswith("PASS ") for line in printed)
