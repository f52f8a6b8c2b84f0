"""Labeled (abscissa, value) series and their CSV emission."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dims import DIMENSIONLESS, DimExpr
from .errors import DomainError


@dataclass
class Curve:
    """One sampled series, tagged with the order it was computed at."""

    label: str
    abscissa_name: str
    rows: np.ndarray  # shape (n, 2), abscissa strictly increasing
    alpha: float | None = None
    dim: DimExpr = field(default_factory=lambda: DIMENSIONLESS)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != 2:
            raise DomainError(f"rows must be (n, 2), got {self.rows.shape}")
        if np.any(np.diff(self.rows[:, 0]) <= 0):
            raise DomainError("abscissa must be strictly increasing")


def write_long_csv(curves, path, value_name="value", comment=None) -> None:
    """All curves in one file: abscissa, alpha, value (plot-tool agnostic)."""
    curves = list(curves)
    if not curves:
        raise DomainError("no curves to write")
    abscissa = curves[0].abscissa_name
    with open(path, "w", encoding="utf-8") as out:
        if comment:
            out.write(f"# {comment}\n")
        out.write(f"{abscissa},alpha,{value_name}\n")
        for curve in curves:
            if curve.alpha is not None:
                tag = f"{curve.alpha:.17g}"
            else:
                tag = curve.label
            for x, v in curve.rows:
                out.write(f"{x:.17g},{tag},{v:.17g}\n")


def write_curve_csv(curve: Curve, path, value_name="value", comment=None) -> None:
    """One curve per file: abscissa, value."""
    with open(path, "w", encoding="utf-8") as out:
        if comment:
            out.write(f"# {comment}\n")
        out.write(f"{curve.abscissa_name},{value_name}\n")
        for x, v in curve.rows:
            out.write(f"{x:.17g},{v:.17g}\n")
