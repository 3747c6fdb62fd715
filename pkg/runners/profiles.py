"""Named data profiles for scenario files.

    zero                  identically 0
    eigenmode:k           sin(k pi s / extent), extent = L in space and T in time
    pulse:t0,t1,amp       amp sin^2(pi (s - t0)/(t1 - t0)) on [t0, t1], 0 elsewhere
    sine:amp,omega        amp sin(omega s)
    table:path            two-column CSV (abscissa, value), linear interpolation

The same profile can serve as initial data (s = x), boundary data (s = t)
or a source constant in time.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from solvers.problem import SourceFn, SpaceFn, TimeFn, zero_space, zero_time
from utils.errors import ScenarioError

FloatArray = npt.NDArray[np.float64]

PROFILE_KINDS = ("zero", "eigenmode", "pulse", "sine", "table")
_ARITY = {"zero": 0, "eigenmode": 1, "pulse": 3, "sine": 2}


@dataclass(frozen=True)
class Profile:
    """A parsed profile; ``table`` holds the sampled abscissae and values"""

    kind: str
    args: tuple[float, ...] = ()
    table: tuple[FloatArray, FloatArray] | None = None

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def support_end(self) -> float | None:
        """Last abscissa with a nonzero value, when the profile is compact"""
        if self.kind == "zero":
            return 0.0
        if self.kind == "pulse":
            return self.args[1]
        return None

    def _shape(self, extent: float) -> SpaceFn:
        kind, args = self.kind, self.args
        if kind == "eigenmode":
            k = args[0]
            return lambda s: np.sin(k * math.pi * np.asarray(s, dtype=np.float64) / extent)
        if kind == "pulse":
            t0, t1, amp = args

            def pulse(s: FloatArray) -> FloatArray:
                s = np.asarray(s, dtype=np.float64)
                inside = (s >= t0) & (s <= t1)
                result: FloatArray = np.where(
                    inside, amp * np.sin(math.pi * (s - t0) / (t1 - t0)) ** 2, 0.0
                )
                return result

            return pulse
        if kind == "sine":
            amp, omega = args
            return lambda s: amp * np.sin(omega * np.asarray(s, dtype=np.float64))
        if kind == "table" and self.table is not None:
            xs, ys = self.table
            return lambda s: np.interp(np.asarray(s, dtype=np.float64), xs, ys)
        return zero_space

    def space(self, L: float) -> SpaceFn:
        return zero_space if self.is_zero else self._shape(L)

    def time(self, T: float) -> TimeFn:
        return zero_time if self.is_zero else self._shape(T)

    def source(self, L: float) -> SourceFn | None:
        """f(x, t) = profile(x); None for zero"""
        if self.is_zero:
            return None
        shape = self._shape(L)

        def f(x: FloatArray, t: FloatArray) -> FloatArray:
            x, t = np.broadcast_arrays(np.asarray(x, dtype=np.float64), np.asarray(t, dtype=np.float64))
            return shape(x)

        return f

    def derivative(self, extent: float, order: int) -> SpaceFn | None:
        """First or second derivative where a closed form exists"""
        kind, args = self.kind, self.args
        if kind == "zero":
            return zero_space
        if kind == "eigenmode":
            w = args[0] * math.pi / extent
            if order == 1:
                return lambda s: w * np.cos(w * np.asarray(s, dtype=np.float64))
            return lambda s: -w * w * np.sin(w * np.asarray(s, dtype=np.float64))
        if kind == "sine":
            amp, omega = args
            if order == 1:
                return lambda s: amp * omega * np.cos(omega * np.asarray(s, dtype=np.float64))
            return lambda s: -amp * omega * omega * np.sin(omega * np.asarray(s, dtype=np.float64))
        if kind == "pulse" and order == 1:
            t0, t1, amp = args
            w = math.pi / (t1 - t0)

            def slope(s: FloatArray) -> FloatArray:
                s = np.asarray(s, dtype=np.float64)
                inside = (s >= t0) & (s <= t1)
                result: FloatArray = np.where(inside, amp * w * np.sin(2.0 * w * (s - t0)), 0.0)
                return result

            return slope
        return None


def _numbers(key: str, text: str, count: int) -> tuple[float, ...]:
    parts = [part.strip() for part in text.split(",")] if text else []
    if len(parts) != count:
        raise ScenarioError(key, f"expected {count} comma-separated numbers, got {text!r}")
    try:
        values = tuple(float(part) for part in parts)
    except ValueError as err:
        raise ScenarioError(key, f"not a number in {text!r}") from err
    if not all(math.isfinite(v) for v in values):
        raise ScenarioError(key, f"non-finite number in {text!r}")
    return values


def _load_table(key: str, path: Path) -> tuple[FloatArray, FloatArray]:
    """Two numeric columns; a non-numeric first row is taken as a header"""
    with path.open(encoding="utf-8") as handle:
        lines = [line for line in handle.read().splitlines() if line.strip() and not line.startswith("#")]
    if lines:
        try:
            [float(cell) for cell in lines[0].split(",")]
        except ValueError:
            lines = lines[1:]
    try:
        data = np.array([[float(cell) for cell in line.split(",")] for line in lines], dtype=np.float64)
    except ValueError as err:
        raise ScenarioError(key, f"table {path} has a non-numeric cell") from err
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 2:
        raise ScenarioError(key, f"table {path} needs at least two rows of two columns")
    if not np.all(np.isfinite(data)) or not np.all(np.diff(data[:, 0]) > 0):
        raise ScenarioError(key, f"table {path} needs finite values and increasing abscissae")
    return data[:, 0].copy(), data[:, 1].copy()


def parse_profile(key: str, text: str, base_dir: Path) -> Profile:
    """Parse ``kind[:args]``; table paths are relative to ``base_dir``"""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip()
    if kind not in PROFILE_KINDS:
        raise ScenarioError(key, f"unknown profile {kind!r}; expected one of {', '.join(PROFILE_KINDS)}")
    if kind == "table":
        if not rest.strip():
            raise ScenarioError(key, "table profile needs a path")
        path = Path(rest.strip())
        if not path.is_absolute():
            path = base_dir / path
        return Profile(kind, table=_load_table(key, path))
    args = _numbers(key, rest.strip(), _ARITY[kind])
    if kind == "pulse" and not args[1] > args[0]:
        raise ScenarioError(key, f"pulse needs t1 > t0, got {args[0]}, {args[1]}")
    return Profile(kind, args)
