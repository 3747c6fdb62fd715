"""Scenario files: flat ``section.key = value`` lines, ``#`` comments, strict keys"""

import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from junction.params import JunctionParams
from runners.profiles import Profile, parse_profile
from solvers.params import (
    NumericsConfig,
    OperatorParams,
    PicardConfig,
    QuadratureConfig,
    SeriesConfig,
    StripDomain,
)
from solvers.problem import ProblemSpec
from utils.errors import DomainError, ScenarioError
from utils.logger import logger

OPERATOR_KINDS = ("kernel-validate", "solve-linear", "solve-nonlinear", "decay-study")
JUNCTION_KINDS = ("solve-esjj", "equivalence-check")
KINDS = OPERATOR_KINDS + JUNCTION_KINDS

# Every accepted key with its default ("" for required)
DEFAULTS: dict[str, str] = {
    "scenario.kind": "",
    "operator.epsilon": "1",
    "operator.a": "0",
    "operator.b": "0",
    "operator.beta": "1",
    "junction.epsilon": "0.3",
    "junction.alpha": "0.8",
    "junction.lambda": "0.3",
    "junction.gamma": "0.05",
    "domain.L": "1",
    "domain.T": "1",
    "grid.nx": "21",
    "grid.nt": "11",
    "numerics.quad_tol": "1e-10",
    "numerics.series_tol": "1e-12",
    "numerics.picard_tol": "1e-6",
    "numerics.max_iter": "50",
    "data.u0": "zero",
    "data.g1": "zero",
    "data.g2": "zero",
    "data.f": "zero",
    "validate.r": "0.5,1,2",
    "validate.s": "1,2,5",
    "picard.window": "inf",
    "picard.coupling": "0.5",
    "decay.horizon": "10",
    "decay.samples": "12",
    "decay.fd_check": "false",
    "equivalence.levels": "101,201,401",
    "equivalence.t_min": "0.1",
}


@dataclass(frozen=True)
class Scenario:
    """A validated scenario; ``settings`` echoes every key with its effective value"""

    kind: str
    domain: StripDomain
    nx: int
    nt: int
    numerics: NumericsConfig
    data: dict[str, Profile]
    settings: dict[str, str]
    operator: OperatorParams | None = None
    junction: JunctionParams | None = None
    r_set: tuple[float, ...] = ()
    s_set: tuple[float, ...] = ()
    coupling: float = 0.0
    horizon: float = 10.0
    samples: int = 12
    fd_check: bool = False
    levels: tuple[int, ...] = ()
    t_min: float = 0.0
    base_dir: Path = field(default_factory=Path)

    @property
    def tolerances(self) -> dict[str, float]:
        """Requested tolerances, by scenario key"""
        return {
            "numerics.quad_tol": self.numerics.quadrature.tol,
            "numerics.series_tol": self.numerics.series.tol,
            "numerics.picard_tol": self.numerics.picard.tol,
        }

    def problem(self) -> ProblemSpec:
        """Linear strip problem built from the operator block and data profiles"""
        if self.operator is None:
            raise ScenarioError("operator", f"kind {self.kind} has no operator block")
        L, T = self.domain.L, self.domain.T
        g1, g2 = self.data["g1"], self.data["g2"]
        ends = [g1.support_end, g2.support_end]
        support = None
        if all(end is not None for end in ends):
            last = max(end for end in ends if end is not None)
            support = last if last > 0 else None
        return ProblemSpec(
            domain=self.domain,
            params=self.operator,
            u0=self.data["u0"].space(L),
            g1=g1.time(T),
            g2=g2.time(T),
            source=self.data["f"].source(L),
            boundary_support=support,
        )


def read_settings(lines: Iterable[str]) -> dict[str, str]:
    """Raw ``key -> value`` pairs; unknown or repeated keys are errors"""
    raw: dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        key = key.strip()
        if not sep:
            raise ScenarioError(f"line {number}", f"expected 'section.key = value', got {text!r}")
        if key not in DEFAULTS:
            raise ScenarioError(key, "unknown key")
        if key in raw:
            raise ScenarioError(key, "given twice")
        raw[key] = value.strip()
    return raw


def apply_override(raw: dict[str, str], assignment: str) -> None:
    """Set one ``section.key=value`` pair on top of the file contents"""
    key, sep, value = assignment.partition("=")
    key = key.strip()
    if not sep:
        raise ScenarioError(assignment, "override must look like section.key=value")
    if key not in DEFAULTS:
        raise ScenarioError(key, "unknown key")
    raw[key] = value.strip()


def _float(raw: dict[str, str], key: str, positive: bool = False, allow_inf: bool = False) -> float:
    text = raw.get(key, DEFAULTS[key])
    try:
        value = float(text)
    except ValueError as err:
        raise ScenarioError(key, f"not a number: {text!r}") from err
    if math.isnan(value) or (math.isinf(value) and not allow_inf):
        raise ScenarioError(key, f"must be finite, got {text!r}")
    if positive and not value > 0:
        raise ScenarioError(key, f"must be > 0, got {text!r}")
    return value


def _int(raw: dict[str, str], key: str, minimum: int) -> int:
    text = raw.get(key, DEFAULTS[key])
    try:
        value = int(text)
    except ValueError as err:
        raise ScenarioError(key, f"not an integer: {text!r}") from err
    if value < minimum:
        raise ScenarioError(key, f"must be >= {minimum}, got {value}")
    return value


def _bool(raw: dict[str, str], key: str) -> bool:
    text = raw.get(key, DEFAULTS[key]).lower()
    if text in ("true", "yes", "1"):
        return True
    if text in ("false", "no", "0"):
        return False
    raise ScenarioError(key, f"expected true or false, got {text!r}")


def _floats(raw: dict[str, str], key: str) -> tuple[float, ...]:
    text = raw.get(key, DEFAULTS[key])
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise ScenarioError(key, f"not a list of numbers: {text!r}") from err
    if not values or not all(math.isfinite(v) for v in values):
        raise ScenarioError(key, f"needs finite numbers, got {text!r}")
    return values


def _block_present(raw: dict[str, str], section: str) -> bool:
    return any(key.startswith(section + ".") for key in raw)


def build_scenario(raw: dict[str, str], base_dir: Path = Path(".")) -> Scenario:
    """Validate raw settings and fill defaults"""
    kind = raw.get("scenario.kind", "")
    if kind not in KINDS:
        raise ScenarioError("scenario.kind", f"expected one of {', '.join(KINDS)}, got {kind!r}")
    wants_junction = kind in JUNCTION_KINDS
    if wants_junction and _block_present(raw, "operator"):
        raise ScenarioError("operator", f"operator block not allowed for kind {kind}")
    if not wants_junction and _block_present(raw, "junction"):
        raise ScenarioError("junction", f"junction block not allowed for kind {kind}")

    operator = None
    junction = None
    if wants_junction:
        junction = JunctionParams(
            epsilon=_float(raw, "junction.epsilon", positive=True),
            alpha=_float(raw, "junction.alpha"),
            lam=_float(raw, "junction.lambda"),
            gamma=_float(raw, "junction.gamma"),
        )
    else:
        epsilon = _float(raw, "operator.epsilon", positive=True)
        beta = _float(raw, "operator.beta", positive=True)
        operator = OperatorParams(epsilon, _float(raw, "operator.a"), _float(raw, "operator.b"), beta)

    domain = StripDomain(_float(raw, "domain.L", positive=True), _float(raw, "domain.T", positive=True))
    window = _float(raw, "picard.window", positive=True, allow_inf=True)
    try:
        numerics = NumericsConfig(
            quadrature=QuadratureConfig(tol=_float(raw, "numerics.quad_tol", positive=True)),
            series=SeriesConfig(tol=_float(raw, "numerics.series_tol", positive=True)),
            picard=PicardConfig(
                tol=_float(raw, "numerics.picard_tol", positive=True),
                max_iter=_int(raw, "numerics.max_iter", 1),
                window=window,
                adaptive_window=math.isinf(window),
            ),
        )
    except DomainError as err:
        raise ScenarioError("numerics", str(err)) from err

    data = {
        name: parse_profile(f"data.{name}", raw.get(f"data.{name}", DEFAULTS[f"data.{name}"]), base_dir)
        for name in ("u0", "g1", "g2", "f")
    }

    s_set = _floats(raw, "validate.s")
    if any(not s > 0 for s in s_set):
        raise ScenarioError("validate.s", "transform points must be > 0")
    r_set = _floats(raw, "validate.r")
    if any(r < 0 for r in r_set):
        raise ScenarioError("validate.r", "distances must be >= 0")

    levels_text = raw.get("equivalence.levels", DEFAULTS["equivalence.levels"])
    try:
        levels = tuple(int(part) for part in levels_text.split(",") if part.strip())
    except ValueError as err:
        raise ScenarioError("equivalence.levels", f"not a list of integers: {levels_text!r}") from err
    if not levels or any(n < 5 for n in levels) or list(levels) != sorted(set(levels)):
        raise ScenarioError("equivalence.levels", "needs increasing grid sizes >= 5")

    t_min = _float(raw, "equivalence.t_min")
    if not 0.0 <= t_min < domain.T:
        raise ScenarioError("equivalence.t_min", f"must lie in [0, T), got {t_min}")
    horizon = _float(raw, "decay.horizon", positive=True)

    settings = {key: raw.get(key, default) for key, default in DEFAULTS.items()}
    scenario = Scenario(
        kind=kind,
        domain=domain,
        nx=_int(raw, "grid.nx", 5),
        nt=_int(raw, "grid.nt", 5),
        numerics=numerics,
        data=data,
        settings=settings,
        operator=operator,
        junction=junction,
        r_set=r_set,
        s_set=s_set,
        coupling=_float(raw, "picard.coupling"),
        horizon=horizon,
        samples=_int(raw, "decay.samples", 3),
        fd_check=_bool(raw, "decay.fd_check"),
        levels=levels,
        t_min=t_min,
        base_dir=base_dir,
    )
    logger.debug(f"scenario {kind} validated")
    return scenario


def parse_scenario(path: Path, overrides: Iterable[str] = ()) -> Scenario:
    """Read, override and validate a scenario file.

    A missing or unreadable file raises ``OSError``; anything invalid raises
    ``ScenarioError`` naming the key.
    """
    with open(path, encoding="utf-8") as handle:
        raw = read_settings(handle)
    for assignment in overrides:
        apply_override(raw, assignment)
    return build_scenario(raw, Path(path).parent)
