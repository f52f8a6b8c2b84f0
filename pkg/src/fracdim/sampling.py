"""Uniform grids, sampled functions, and their CSV exchange format."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dims import DIMENSIONLESS, DimExpr
from .errors import CsvParseError, DomainError


@dataclass(frozen=True)
class UniformGrid:
    """Nodes t0 + k*dt for k = 0..n-1."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.t0) and self.t0 >= 0.0):
            raise DomainError(f"grid origin must be finite and >= 0, got {self.t0}")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f"grid spacing must be positive, got {self.dt}")
        if self.n < 2:
            raise DomainError(f"grid needs at least 2 nodes, got {self.n}")

    @classmethod
    def from_range(cls, t_max: float, n: int, t0: float = 0.0) -> "UniformGrid":
        if n < 2:
            raise DomainError(f"grid needs at least 2 nodes, got {n}")
        return cls(t0, (t_max - t0) / (n - 1), n)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_max(self) -> float:
        return self.t0 + self.dt * (self.n - 1)


@dataclass
class SampledFunction:
    """Real values on a uniform grid, tagged with the value's time exponent.

    The abscissa is ordinary time for kernel operations and dimensionless
    time for solver outputs; the grid itself does not distinguish the two.
    """

    grid: UniformGrid
    values: np.ndarray
    dim: DimExpr = field(default_factory=lambda: DIMENSIONLESS)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise DomainError(
                f"expected {self.grid.n} samples, got shape {self.values.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise DomainError("samples must all be finite")

    @property
    def t(self) -> np.ndarray:
        return self.grid.times

    def __len__(self) -> int:
        return self.grid.n


def from_callable(fn, grid: UniformGrid, dim: DimExpr = DIMENSIONLESS) -> SampledFunction:
    t = grid.times
    values = np.asarray(fn(t), dtype=float)
    if values.shape != t.shape:  # fn only defined pointwise
        values = np.array([fn(tk) for tk in t], dtype=float)
    return SampledFunction(grid, values, dim)


def write_csv(f: SampledFunction, path, comment: str | None = None) -> None:
    """Write ``t,value`` rows with full float round-trip precision."""
    with open(path, "w", encoding="utf-8") as out:
        if comment:
            out.write(f"# {comment}\n")
        out.write("t,value\n")
        for tk, vk in zip(f.grid.times, f.values):
            out.write(f"{tk:.17g},{vk:.17g}\n")


def read_csv(path, dim: DimExpr = DIMENSIONLESS) -> SampledFunction:
    """Parse a ``t,value`` CSV back into a SampledFunction.

    Comment lines start with '#'.  The t column must be uniformly spaced;
    errors report 1-based line numbers.
    """
    times = []
    values = []
    with open(path, "r", encoding="utf-8") as src:
        for lineno, raw in enumerate(src, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.lower().replace(" ", "") == "t,value":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvParseError(
                    f"line {lineno}: expected 2 columns, got {len(parts)}",
                    line_number=lineno,
                )
            try:
                times.append(float(parts[0]))
                values.append(float(parts[1]))
            except ValueError:
                raise CsvParseError(
                    f"line {lineno}: could not parse {line!r} as numbers",
                    line_number=lineno,
                ) from None
    if len(times) < 2:
        raise CsvParseError(f"{path}: need at least 2 data rows, got {len(times)}")
    t = np.asarray(times)
    steps = np.diff(t)
    dt = steps[0]
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-8, atol=1e-12):
        bad = int(np.argmax(np.abs(steps - dt))) + 2  # +2: 1-based, second row of pair
        raise CsvParseError(
            f"t column is not uniformly spaced (first mismatch near data row {bad})",
            line_number=bad,
        )
    grid = UniformGrid(t[0], dt, len(t))
    return SampledFunction(grid, np.asarray(values), dim)
