"""Summary and plotting-stub artifacts written next to the CSV files"""

from pathlib import Path

from __version__ import __version__
from runners.base import RunOutcome
from runners.scenario import JUNCTION_KINDS, Scenario
from utils.csv_io import format_cell
from utils.logger import logger

PLOT_STUB = '''"""Plot field.csv (columns x, t, u) as a space-time image. Needs matplotlib."""

import csv
import sys

import matplotlib.pyplot as plt
import numpy as np

path = sys.argv[1] if len(sys.argv) > 1 else "field.csv"
with open(path, encoding="utf-8") as handle:
    rows = [tuple(map(float, row)) for row in list(csv.reader(handle))[1:]]
data = np.array(rows)
xs = np.unique(data[:, 0])
ts = np.unique(data[:, 1])
u = data[:, 2].reshape(ts.size, xs.size)
plt.pcolormesh(xs, ts, u, shading="auto")
plt.xlabel("x")
plt.ylabel("t")
plt.colorbar(label="u")
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def _echoed_keys(scenario: Scenario) -> list[str]:
    skip = "operator." if scenario.kind in JUNCTION_KINDS else "junction."
    return [key for key in scenario.settings if not key.startswith(skip)]


def summary_text(scenario: Scenario, outcome: RunOutcome) -> str:
    """Parameters, requested versus achieved tolerances and check verdicts"""
    lines = [f"greenstrip {__version__}", f"kind = {scenario.kind}", "", "[parameters]"]
    lines += [f"{key} = {scenario.settings[key]}" for key in _echoed_keys(scenario)]
    lines += ["", "[tolerances]"]
    requested = {**scenario.tolerances, **outcome.requested}
    for key in sorted(set(requested) | set(outcome.achieved)):
        want = format_cell(requested[key]) if key in requested else "-"
        got = outcome.achieved.get(key)
        got_text = "met" if got is None else format_cell(got)
        if key in requested and key not in outcome.achieved:
            got_text = "not used"
        lines.append(f"{key}: requested {want}, achieved {got_text}")
    lines += ["", "[checks]"]
    for check in outcome.checks:
        verdict = "PASS" if check.passed else "FAIL"
        lines.append(f"{verdict} {check.name}" + (f": {check.detail}" if check.detail else ""))
    if outcome.failure:
        lines.append(f"ERROR {outcome.failure}")
    lines += ["", f"artifacts = {', '.join(outcome.artifacts)}"]
    lines.append(f"result = {'PASS' if outcome.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def write_summary(out_dir: Path, scenario: Scenario, outcome: RunOutcome) -> Path:
    path = out_dir / "summary.txt"
    path.write_text(summary_text(scenario, outcome), encoding="utf-8")
    logger.info(f"summary written to {path}")
    return path


def write_plot_stub(out_dir: Path) -> Path:
    path = out_dir / "plot_field.py"
    path.write_text(PLOT_STUB, encoding="utf-8")
    return path
