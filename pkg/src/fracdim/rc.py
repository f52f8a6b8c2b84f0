"""Fractional charging of an RC circuit with the exponential time scale.

With gamma = 1/(R C) and asymptotic charge q0 = V0 C, the charging
equation D^a q + gamma q = gamma q0 becomes, after rescaling with
phi(t, a) = exp(-(1-a) gamma t) / gamma,

    D^a q(tau) + q / (1 + (1-a) tau) = q0 / (1 + (1-a) tau),

whose integrating-factor solution is

    q(tau, a) = q0 + c0 (1 + (1-a) tau) (2 - a + (1-a) tau)^(1/(a-1)).

Starting from an uncharged capacitor fixes c0 = -q0 (2-a)^(1/(1-a)), and
mapping tau back to ordinary time gives

    q(t, a) = q0 (1 - e^x ((2-a) / ((1-a) + e^x))^(1/(1-a))),
    x = (1-a) gamma t,

which collapses to the textbook q0 (1 - exp(-gamma t)) as a -> 1.
Fractional powers are evaluated in the log domain (expm1/log1p) so the
exponent 1/(1-a) stays finite-precision-safe near a = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import DomainError
from .kernels import _alpha
from .rescaling import TimeScale, rc_exponential_scale
from .sampling import UniformGrid

# Above this order the closed form is replaced by its classical limit:
# the exponent 1/(1-a) amplifies rounding in the log-domain bracket.
CLASSICAL_CROSSOVER = 1.0 - 1e-6

DEFAULT_ALPHA_SWEEP = (0.5, 0.7, 0.9, 1.0)


@dataclass(frozen=True)
class RCParams:
    """Resistor, capacitor, and source voltage of the charging loop."""

    resistance: float  # ohms
    capacitance: float  # farads
    source_voltage: float  # volts

    def __post_init__(self):
        if not (np.isfinite(self.resistance) and self.resistance > 0.0):
            raise DomainError(f"resistance must be positive, got {self.resistance}")
        if not (np.isfinite(self.capacitance) and self.capacitance > 0.0):
            raise DomainError(f"capacitance must be positive, got {self.capacitance}")
        if not np.isfinite(self.source_voltage):
            raise DomainError("source voltage must be finite")

    @property
    def gamma(self) -> float:
        """Inverse time constant 1/(R C), in 1/seconds."""
        return 1.0 / (self.resistance * self.capacitance)

    @property
    def q0(self) -> float:
        """Asymptotic charge V0 C, in coulombs."""
        return self.source_voltage * self.capacitance

    @classmethod
    def from_rate(cls, gamma: float, q0: float = 1.0) -> "RCParams":
        """Pick the (non-unique) R, C, V0 realizing a given gamma and q0
        with C = 1 F."""
        if not (np.isfinite(gamma) and gamma > 0.0):
            raise DomainError(f"rate constant must be positive, got {gamma}")
        return cls(resistance=1.0 / gamma, capacitance=1.0, source_voltage=q0)


def rc_time_scale(params: RCParams) -> TimeScale:
    """The exponential scale phi = exp(-(1-a) gamma t) / gamma with its
    closed-form tau and inverse."""
    return rc_exponential_scale(params.gamma)


def c0_for_zero_start(params: RCParams, order) -> float:
    """Integration constant for q(0, a) = 0: c0 = -q0 (2-a)^(1/(1-a)).

    At a = 1 this tends to -q0 e, the constant of the classical limit.
    """
    alpha = _alpha(order)
    if alpha >= CLASSICAL_CROSSOVER:
        return -params.q0 * np.e
    return -params.q0 * np.exp(np.log(2.0 - alpha) / (1.0 - alpha))


def charge_tau(params: RCParams, tau, order, c0: float):
    """Charge as a function of dimensionless time, for a caller-chosen
    integration constant (c0 = 0 gives the stationary solution q0)."""
    alpha = _alpha(order)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("dimensionless time must be >= 0")
    if alpha >= CLASSICAL_CROSSOVER:
        # Limit of the fractional-power factor as a -> 1: exp(-(1 + tau)).
        out = params.q0 + c0 * np.exp(-(1.0 + tau))
    else:
        power = np.exp(np.log(2.0 - alpha + (1.0 - alpha) * tau) / (alpha - 1.0))
        out = params.q0 + c0 * (1.0 + (1.0 - alpha) * tau) * power
    return out if out.ndim else float(out)


def charge_t(params: RCParams, t, order):
    """Charge in ordinary time for an initially uncharged capacitor."""
    alpha = _alpha(order)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be >= 0")
    gamma, q0 = params.gamma, params.q0
    if alpha >= CLASSICAL_CROSSOVER:
        out = -q0 * np.expm1(-gamma * t)
    else:
        x = (1.0 - alpha) * gamma * t
        # ((2-a)/((1-a)+e^x))^(1/(1-a)) in the log domain: the bracket is
        # 1 + (1-e^x)/((1-a)+e^x), written with expm1/log1p so the a -> 1
        # cancellation stays exact.
        bracket = np.log1p(-np.expm1(x) / ((1.0 - alpha) + np.exp(x)))
        out = q0 * (1.0 - np.exp(x + bracket / (1.0 - alpha)))
    return out if out.ndim else float(out)


def capacitor_voltage(params: RCParams, t, order):
    """Voltage across the capacitor while charging: q(t, a) / C."""
    return charge_t(params, t, order) / params.capacitance


def figure2_curves(params: RCParams, alphas, t_grid: UniformGrid):
    """Voltage curves for an order sweep, one Curve per alpha, in the
    order requested."""
    alphas = [_alpha(a) for a in alphas]
    if not alphas:
        raise DomainError("alpha sweep must not be empty")
    if t_grid.t0 != 0.0:
        raise DomainError("sweep grid must start at t = 0")
    t = t_grid.times
    curves = []
    for alpha in alphas:
        v = capacitor_voltage(params, t, alpha)
        curves.append(
            Curve(
                label=f"alpha={alpha:g}",
                abscissa_name="t",
                rows=np.column_stack([t, v]),
                alpha=alpha,
            )
        )
    return curves
