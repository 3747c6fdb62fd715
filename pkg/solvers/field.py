"""Solution values on a uniform space-time grid"""

from collections.abc import Callable
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import numpy.typing as npt

from solvers.params import StripDomain
from utils.csv_io import write_csv
from utils.errors import DataError, DomainError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class SpaceTimeField:
    """values[i, j] is the solution at x_i = i L/(nx-1), t_j = j T/(nt-1)"""

    values: FloatArray
    domain: StripDomain
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.values.ndim != 2:
            raise DomainError(f"field values must be 2-D, got shape {self.values.shape}")
        if self.nx < 3 or self.nt < 2:
            raise DomainError(f"field grid needs nx >= 3 and nt >= 2, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise DataError(f"non-finite field values ({self.metadata.get('source', 'unknown')})")

    @property
    def nx(self) -> int:
        return int(self.values.shape[0])

    @property
    def nt(self) -> int:
        return int(self.values.shape[1])

    @property
    def x(self) -> FloatArray:
        return np.linspace(0.0, self.domain.L, self.nx)

    @property
    def t(self) -> FloatArray:
        return np.linspace(0.0, self.domain.T, self.nt)

    @property
    def hx(self) -> float:
        return self.domain.L / (self.nx - 1)

    @property
    def ht(self) -> float:
        return self.domain.T / (self.nt - 1)

    def with_values(self, values: FloatArray, source: str) -> "SpaceTimeField":
        """Same grid, new values, provenance extended by ``source``"""
        meta = dict(self.metadata)
        meta["source"] = source
        return replace(self, values=np.array(values, dtype=np.float64), metadata=meta)

    def sup_distance(self, other: "SpaceTimeField") -> float:
        """Sup-norm distance at the nodes shared by both grids"""
        step_x = self._ratio(self.nx, other.nx)
        step_t = self._ratio(self.nt, other.nt)
        mine = self.values
        theirs = other.values
        if self.nx > other.nx:
            mine = mine[::step_x]
        else:
            theirs = theirs[::step_x]
        if self.nt > other.nt:
            mine = mine[:, ::step_t]
        else:
            theirs = theirs[:, ::step_t]
        return float(np.max(np.abs(mine - theirs)))

    @staticmethod
    def _ratio(n: int, m: int) -> int:
        fine, coarse = max(n, m), min(n, m)
        if (fine - 1) % (coarse - 1):
            raise DomainError(f"grids with {n} and {m} nodes do not nest")
        return (fine - 1) // (coarse - 1)

    def to_csv(self, path: Path) -> None:
        """Header x,t,u; rows ordered by t, then x"""
        xs = self.x
        ts = self.t
        write_csv(
            path,
            ("x", "t", "u"),
            ((xs[i], ts[j], self.values[i, j]) for j in range(self.nt) for i in range(self.nx)),
        )


def field_from_function(
    fn: Callable[[FloatArray, FloatArray], npt.ArrayLike], domain: StripDomain, nx: int, nt: int, source: str
) -> SpaceTimeField:
    """Sample a vectorized fn(x, t) on the grid"""
    x = np.linspace(0.0, domain.L, nx)[:, np.newaxis]
    t = np.linspace(0.0, domain.T, nt)[np.newaxis, :]
    values = np.broadcast_to(np.asarray(fn(x, t), dtype=np.float64), (nx, nt))
    return SpaceTimeField(np.array(values), domain, {"source": source})
