"""Fractional derivatives of sampled functions, for two memory kernels.

Exponential (non-singular) kernel:

    D^a f(t) = pf(a) * int_0^t f'(s) exp(-lam (t - s)) ds,
    lam = a / (1 - a),   pf(a) = (2 - a) M(a) / (2 (1 - a)),

with the default normalization M(a) = 2/(2-a) making pf = 1/(1-a).
The integral is evaluated by treating f as piecewise linear and
integrating the kernel exactly over each cell, which collapses to the
one-step recurrence

    I[k+1] = exp(-lam dt) I[k] + m[k] (1 - exp(-lam dt)) / lam

(m[k] = cell slope), so the cost is O(n) instead of O(n^2).  Exact kernel
integration keeps the step stable as a -> 1 where lam blows up.

Power-law (singular) kernel, for comparison:

    D^a f(t) = (1/Gamma(1-a)) int_0^t f'(s) (t - s)^-a ds,

discretized with the standard L1 piecewise-linear weights, accuracy
O(dt^(2-a)).

Both operators anchor the memory integral at t = 0, so input grids must
start there.  At a = 1 exactly, both return the backward-difference
derivative of f with value 0 at the origin: that is the pointwise limit
of the 0-anchored schemes (the integral over [0, 0] is empty), and it
matches the classical derivative at every later node to O(dt).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.signal import lfilter
from scipy.special import gamma as gamma_fn

from .dims import PER_TIME, TIME, DimensionedQuantity, DimExpr
from .errors import DimensionMismatchError, DomainError
from .sampling import SampledFunction

# Exponent contributed by the power-law kernel: -alpha, kept symbolic.
_CAPUTO_DIM = DimExpr(0, -1)


@dataclass(frozen=True)
class FractionalOrder:
    """Order of differentiation, restricted to (0, 1]."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"order must lie in (0, 1], got {self.alpha}")


def _alpha(order) -> float:
    if isinstance(order, FractionalOrder):
        return order.alpha
    return FractionalOrder(float(order)).alpha


@dataclass(frozen=True)
class KernelNormalization:
    """Pluggable normalization M(a) for the exponential kernel.

    The default satisfies M(a) (2 - a) / 2 = 1, so the operator prefactor
    is exactly 1/(1-a).
    """

    m_of_alpha: Callable[[float], float]

    def prefactor(self, alpha: float) -> float:
        return (2.0 - alpha) * self.m_of_alpha(alpha) / (2.0 * (1.0 - alpha))


DEFAULT_NORMALIZATION = KernelNormalization(lambda a: 2.0 / (2.0 - a))


def _require_zero_origin(f: SampledFunction) -> None:
    if f.grid.t0 != 0.0:
        raise DomainError(
            f"memory integrals are anchored at t = 0; grid starts at {f.grid.t0}"
        )


def discrete_derivative(f: SampledFunction) -> SampledFunction:
    """Backward-difference derivative with value 0 at the first node.

    This is the a = 1 branch shared by both kernels; the zero at the
    origin reflects the empty memory integral there, not d/dt itself.
    """
    g = np.empty_like(f.values)
    g[0] = 0.0
    g[1:] = np.diff(f.values) / f.grid.dt
    return SampledFunction(f.grid, g, f.dim + PER_TIME)


def cf_derivative(
    f: SampledFunction,
    order,
    normalization: KernelNormalization = DEFAULT_NORMALIZATION,
) -> SampledFunction:
    """Exponential-kernel fractional derivative via the O(n) recurrence.

    The operator is dimensionless, so the output keeps f's time exponent.
    """
    _require_zero_origin(f)
    alpha = _alpha(order)
    if alpha == 1.0:
        g = discrete_derivative(f)
        return SampledFunction(f.grid, g.values, f.dim)
    dt = f.grid.dt
    lam = alpha / (1.0 - alpha)
    decay = np.exp(-lam * dt)
    # Exact kernel mass over one cell; expm1 keeps small lam*dt accurate.
    cell = -np.expm1(-lam * dt) / lam
    slopes = np.diff(f.values) / dt
    inner = lfilter([cell], [1.0, -decay], slopes)
    g = np.concatenate(([0.0], inner))
    g *= normalization.prefactor(alpha)
    return SampledFunction(f.grid, g, f.dim)


def cf_derivative_direct(
    f: SampledFunction,
    order,
    normalization: KernelNormalization = DEFAULT_NORMALIZATION,
) -> SampledFunction:
    """O(n^2) evaluation of the same discretization, summing each node's
    history with freshly computed exponentials.  Cross-check for the
    recurrence, not for production use."""
    _require_zero_origin(f)
    alpha = _alpha(order)
    if alpha == 1.0:
        g = discrete_derivative(f)
        return SampledFunction(f.grid, g.values, f.dim)
    t = f.grid.times
    dt = f.grid.dt
    lam = alpha / (1.0 - alpha)
    pf = normalization.prefactor(alpha)
    slopes = np.diff(f.values) / dt
    g = np.zeros_like(f.values)
    for k in range(1, f.grid.n):
        kernel = np.exp(-lam * (t[k] - t[: k + 1]))
        cells = np.diff(kernel) / lam
        g[k] = pf * np.dot(slopes[:k], cells)
    return SampledFunction(f.grid, g, f.dim)


def cf_limit_alpha_zero(f: SampledFunction) -> SampledFunction:
    """The a -> 0+ limit of the exponential-kernel operator: f(t) - f(0)."""
    return SampledFunction(f.grid, f.values - f.values[0], f.dim)


def caputo_derivative(f: SampledFunction, order) -> SampledFunction:
    """Power-law-kernel fractional derivative by the L1 scheme.

    Output picks up the kernel's sec^-alpha, tracked symbolically.
    """
    _require_zero_origin(f)
    alpha = _alpha(order)
    out_dim = f.dim + _CAPUTO_DIM
    if alpha == 1.0:
        g = discrete_derivative(f)
        return SampledFunction(f.grid, g.values, out_dim)
    dt = f.grid.dt
    n = f.grid.n
    k = np.arange(n - 1, dtype=float)
    weights = (k + 1.0) ** (1.0 - alpha) - k ** (1.0 - alpha)
    increments = np.diff(f.values)
    conv = np.convolve(increments, weights)[: n - 1]
    g = np.concatenate(([0.0], conv)) * (dt ** (-alpha) / gamma_fn(2.0 - alpha))
    return SampledFunction(f.grid, g, out_dim)


def sigma_rescaled_caputo(
    f: SampledFunction, order, sigma: DimensionedQuantity
) -> SampledFunction:
    """Power-law derivative divided by sigma^(1-a), restoring sec^-1.

    sigma must carry exactly one power of time and be positive.
    """
    if sigma.dim != TIME:
        raise DimensionMismatchError(
            f"sigma must carry time exponent 1, got {sigma.dim}"
        )
    if not (np.isfinite(sigma.value) and sigma.value > 0.0):
        raise DomainError(f"sigma must be positive, got {sigma.value}")
    alpha = _alpha(order)
    base = caputo_derivative(f, order)
    scale = sigma.value ** (alpha - 1.0)
    return SampledFunction(f.grid, scale * base.values, f.dim + PER_TIME)


def laplace_transform(f: SampledFunction, s: float) -> float:
    """Truncated Laplace transform int_0^T f(t) exp(-s t) dt, Simpson rule.

    The truncation error is the caller's budget: pick the grid so that
    exp(-s T) |f(T)| is negligible.
    """
    if s <= 0.0:
        raise DomainError(f"transform variable must be positive, got {s}")
    t = f.grid.times
    return float(simpson(f.values * np.exp(-s * t), x=t))


def cf_laplace_residual(
    f: SampledFunction,
    order,
    s: float,
    normalization: KernelNormalization = DEFAULT_NORMALIZATION,
) -> float:
    """Numeric check of the operator's Laplace-transform identity.

    Returns |L{D^a f}(s) - (s F(s) - f(0)) / ((1-a) s + a)| with both
    transforms computed on f's grid.  Small values certify the identity;
    the right-hand side always uses the default normalization, so a
    perturbed ``normalization`` shows up as a nonzero residual.
    """
    alpha = _alpha(order)
    lhs = laplace_transform(cf_derivative(f, order, normalization), s)
    F = laplace_transform(f, s)
    rhs = (s * F - f.values[0]) / ((1.0 - alpha) * s + alpha)
    return abs(lhs - rhs)
