"""Base runner class for all scenario kinds"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import ClassVar

from runners.scenario import Scenario


@dataclass(frozen=True)
class Check:
    """A named pass/fail verdict with the measured value behind it"""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class RunOutcome:
    """Checks and achieved tolerances (None when only "no error raised" is known)"""

    checks: list[Check] = field(default_factory=list)
    achieved: dict[str, float | None] = field(default_factory=dict)
    requested: dict[str, float] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)
    failure: str = ""

    @property
    def passed(self) -> bool:
        return not self.failure and all(check.passed for check in self.checks)


class BaseRunner(ABC):
    """Abstract base class for scenario runners"""

    kind: ClassVar[str]

    def __init__(self, scenario: Scenario, out_dir: Path) -> None:
        self.scenario = scenario
        self.out_dir = out_dir

    @abstractmethod
    def run(self, outcome: RunOutcome) -> None:
        """Compute, write artifacts into ``out_dir`` and record checks on ``outcome``"""
        pass

    def artifact(self, outcome: RunOutcome, name: str) -> Path:
        """Path of an artifact, recorded on the outcome"""
        outcome.artifacts.append(name)
        return self.out_dir / name
