"""Scenario runners and the dispatcher"""

from pathlib import Path

from runners.artifacts import write_summary
from runners.base import BaseRunner, RunOutcome
from runners.junction_runners import EquivalenceRunner, SolveEsjjRunner
from runners.operator_runners import (
    DecayStudyRunner,
    KernelValidateRunner,
    SolveLinearRunner,
    SolveNonlinearRunner,
)
from runners.scenario import Scenario
from utils.errors import GreenStripError, ScenarioError
from utils.logger import logger

RUNNERS: dict[str, type[BaseRunner]] = {
    runner.kind: runner
    for runner in (
        KernelValidateRunner,
        SolveLinearRunner,
        SolveNonlinearRunner,
        DecayStudyRunner,
        SolveEsjjRunner,
        EquivalenceRunner,
    )
}


def run_scenario(scenario: Scenario, out_dir: Path) -> int:
    """Run one scenario and write its artifacts; 0 when every check passes, else 1.

    Numerical failures are recorded in ``summary.txt`` rather than raised.
    ``OSError`` from the output directory propagates.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    runner = RUNNERS[scenario.kind](scenario, out_dir)
    outcome = RunOutcome()
    logger.info(f"running {scenario.kind} into {out_dir}")
    try:
        runner.run(outcome)
    except ScenarioError:
        raise
    except GreenStripError as err:
        outcome.failure = f"{type(err).__name__}: {err}"
        logger.error(f"{scenario.kind} failed: {outcome.failure}")
    write_summary(out_dir, scenario, outcome)
    logger.info(f"{scenario.kind}: {'PASS' if outcome.passed else 'FAIL'}")
    return 0 if outcome.passed else 1
