"""Auxiliary time scales and the dimensionless-time substitution.

A scale is a positive function phi(t, a) with units of seconds.  It
defines the dimensionless time

    tau(t, a) = int_0^t ds / phi(s, a),

in which a first-order equation driven by the dimensionless
exponential-kernel operator is homogeneous: dividing the operator by
phi gives sec^-1, matching d/dt, and the rescaled coefficients
P phi, Q phi lose their sec^-1.

Scales may ship closed forms for tau and its inverse; otherwise tau is
computed by adaptive quadrature and inverted by bracketed root-finding
on the strictly increasing map.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .dims import DIMENSIONLESS, PER_TIME, TIME, check_homogeneity
from .errors import DomainError, TauRangeError
from .kernels import FractionalOrder, _alpha
from .sampling import UniformGrid

_QUAD_KW = dict(epsabs=1e-14, epsrel=1e-10, limit=200)
_INVERT_TOL = 1e-12
# Bracket growth stops once tau stops moving by more than this; the
# remaining headroom estimates the supremum of the reachable range.
_SATURATION_EPS = 1e-13


@dataclass(frozen=True)
class TimeScale:
    """phi(t, a) plus optional closed forms for tau and its inverse.

    phi must be strictly positive for t >= 0 and a in (0, 1].  When
    ``tau_closed_form`` is supplied it must agree with the quadrature
    definition (dtau/dt = 1/phi); ``dphi_dt`` enables analytic
    coefficient derivatives after rescaling.
    """

    phi: Callable[[float, float], float]
    tau_closed_form: Callable[[float, float], float] | None = None
    t_of_tau_closed_form: Callable[[float, float], float] | None = None
    dphi_dt: Callable[[float, float], float] | None = None
    name: str = "custom"


def constant_scale(sigma_seconds: float) -> TimeScale:
    """phi equal to a constant number of seconds: tau = t / sigma.

    Reproduces the sigma-rule bookkeeping as the special case of a
    t-independent scale.
    """
    if not (np.isfinite(sigma_seconds) and sigma_seconds > 0.0):
        raise DomainError(f"constant scale needs sigma > 0, got {sigma_seconds}")
    s = float(sigma_seconds)
    return TimeScale(
        phi=lambda t, a: s,
        tau_closed_form=lambda t, a: t / s,
        t_of_tau_closed_form=lambda tau, a: tau * s,
        dphi_dt=lambda t, a: 0.0,
        name="constant",
    )


def rc_exponential_scale(gamma: float) -> TimeScale:
    """The charging-circuit scale phi = exp(-(1-a) gamma t) / gamma.

    Closed forms: tau = (exp((1-a) gamma t) - 1)/(1-a), with the a = 1
    branch tau = gamma t, and inverse t = log1p((1-a) tau)/((1-a) gamma).
    """
    if not (np.isfinite(gamma) and gamma > 0.0):
        raise DomainError(f"rate constant must be positive, got {gamma}")
    g = float(gamma)

    def phi(t, a):
        return np.exp(-(1.0 - a) * g * t) / g

    def tau_cf(t, a):
        if a == 1.0:
            return g * t
        return np.expm1((1.0 - a) * g * t) / (1.0 - a)

    def t_cf(tau, a):
        if a == 1.0:
            return tau / g
        return np.log1p((1.0 - a) * tau) / ((1.0 - a) * g)

    def dphi(t, a):
        return -(1.0 - a) * np.exp(-(1.0 - a) * g * t)

    return TimeScale(phi, tau_cf, t_cf, dphi, name="rc-exponential")


def tabulated_scale(t_nodes, phi_values) -> TimeScale:
    """Scale interpolated from (t, phi) samples with a monotone cubic.

    The interpolant ignores a (tabulated data fixes one shape); values
    must be positive at every node.
    """
    t_nodes = np.asarray(t_nodes, dtype=float)
    phi_values = np.asarray(phi_values, dtype=float)
    if t_nodes.ndim != 1 or t_nodes.shape != phi_values.shape or len(t_nodes) < 2:
        raise DomainError("tabulated scale needs matching 1-d t and phi arrays")
    if np.any(np.diff(t_nodes) <= 0):
        raise DomainError("tabulated t values must be strictly increasing")
    if np.any(phi_values <= 0) or not np.all(np.isfinite(phi_values)):
        raise DomainError("tabulated phi values must be finite and positive")
    interp = PchipInterpolator(t_nodes, phi_values, extrapolate=True)
    dinterp = interp.derivative()
    return TimeScale(
        phi=lambda t, a: float(interp(t)),
        dphi_dt=lambda t, a: float(dinterp(t)),
        name="tabulated",
    )


def tau_of_t(scale: TimeScale, t, order) -> float:
    """Dimensionless time reached after t seconds."""
    alpha = _alpha(order)
    if np.ndim(t) > 0:
        return np.array([tau_of_t(scale, tk, alpha) for tk in np.asarray(t)])
    t = float(t)
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if scale.tau_closed_form is not None:
        return float(scale.tau_closed_form(t, alpha))

    def integrand(s):
        p = scale.phi(s, alpha)
        if not np.isfinite(p) or p <= 0.0:
            raise DomainError(f"phi must stay positive; phi({s}) = {p}")
        return 1.0 / p

    value, _ = quad(integrand, 0.0, t, **_QUAD_KW)
    return value


def t_of_tau(scale: TimeScale, tau, order) -> float:
    """Invert tau(t); raises TauRangeError past the reachable supremum."""
    alpha = _alpha(order)
    if np.ndim(tau) > 0:
        return np.array([t_of_tau(scale, xk, alpha) for xk in np.asarray(tau)])
    tau = float(tau)
    if tau < 0.0:
        raise DomainError(f"dimensionless time must be >= 0, got {tau}")
    if tau == 0.0:
        return 0.0
    if scale.t_of_tau_closed_form is not None:
        return float(scale.t_of_tau_closed_form(tau, alpha))

    # Grow the bracket geometrically; tau(t) is strictly increasing, so
    # stalling growth means the target sits above the reachable range.
    hi = 1.0
    tau_hi = tau_of_t(scale, hi, alpha)
    while tau_hi < tau:
        hi_next = 2.0 * hi
        tau_next = tau_of_t(scale, hi_next, alpha)
        if tau_next - tau_hi <= _SATURATION_EPS * max(1.0, tau_next):
            raise TauRangeError(
                f"tau = {tau} exceeds the reachable range of scale "
                f"{scale.name!r}; supremum is about {tau_next}",
                supremum=tau_next,
            )
        hi, tau_hi = hi_next, tau_next
    return brentq(
        lambda t: tau_of_t(scale, t, alpha) - tau, 0.0, hi, xtol=_INVERT_TOL
    )


@dataclass(frozen=True)
class ClassicalLinearODE:
    """dx/dt + p x = q with constant coefficients, x(0) = x0.

    p and q carry sec^-1 (times x's own units for q); x itself is
    treated as dimensionless for bookkeeping.
    """

    p: float
    q: float
    x0: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.p) and np.isfinite(self.q)):
            raise DomainError("coefficients must be finite")

    def solution(self, t):
        """Exact solution, used as the classical-limit reference."""
        t = np.asarray(t, dtype=float)
        if self.p == 0.0:
            return self.x0 + self.q * t
        ratio = self.q / self.p
        return ratio + (self.x0 - ratio) * np.exp(-self.p * t)


def _dense_inverse(scale: TimeScale, alpha: float, tau_max: float):
    """Monotone-cubic t(tau) built from one cumulative quadrature pass.

    For scales without closed forms, evaluating coefficients at every
    quadrature node through root-finding would be quadratically
    expensive; a single dense table of the strictly increasing map keeps
    each later lookup O(1) at comparable accuracy.
    """
    t_reach = t_of_tau(scale, tau_max, alpha)
    t_grid = np.linspace(0.0, t_reach, 16385)
    inv_phi = np.empty_like(t_grid)
    for i, t in enumerate(t_grid):
        p = scale.phi(t, alpha)
        if not np.isfinite(p) or p <= 0.0:
            raise DomainError(f"phi must stay positive; phi({t}) = {p}")
        inv_phi[i] = 1.0 / p
    taus = cumulative_simpson(inv_phi, x=t_grid, initial=0.0)
    if np.any(np.diff(taus) <= 0):
        raise DomainError("tau(t) is not strictly increasing on the solve range")
    interp = PchipInterpolator(taus, t_grid, extrapolate=False)
    top = taus[-1]

    def t_at(tau):
        return float(interp(min(max(tau, 0.0), top)))

    return t_at


def rescale_problem(ode: ClassicalLinearODE, scale: TimeScale, order, tau_max: float):
    """Turn the classical problem into its dimensionless counterpart.

    Coefficients become p(tau) = p * phi(t(tau), a) and likewise for q,
    each symbolically dimensionless (sec^-1 times seconds); the check is
    asserted here so a misdeclared scale fails loudly.
    """
    from .solver import LinearFDEProblem  # local import to avoid a cycle

    alpha = _alpha(order)
    if not (np.isfinite(tau_max) and tau_max > 0.0):
        raise DomainError(f"tau_max must be positive, got {tau_max}")

    coeff_dim = PER_TIME + TIME
    if not check_homogeneity([coeff_dim, DIMENSIONLESS]):
        raise DomainError("rescaled coefficients are not dimensionless")

    if scale.t_of_tau_closed_form is not None:
        def t_at(tau):
            return t_of_tau(scale, tau, alpha)
    else:
        t_at = _dense_inverse(scale, alpha, tau_max * (1.0 + 1e-12) + 1e-300)

    def phi_at(tau):
        return scale.phi(t_at(tau), alpha)

    def p_fun(tau):
        return ode.p * phi_at(tau)

    def q_fun(tau):
        return ode.q * phi_at(tau)

    p_deriv = q_deriv = None
    if scale.dphi_dt is not None:
        # d/dtau phi(t(tau)) = phi'(t) * dt/dtau = phi'(t) * phi(t).
        def dphi_dtau(tau):
            t = t_at(tau)
            return scale.dphi_dt(t, alpha) * scale.phi(t, alpha)

        def p_deriv(tau):
            return ode.p * dphi_dtau(tau)

        def q_deriv(tau):
            return ode.q * dphi_dtau(tau)

    return LinearFDEProblem(
        p=p_fun,
        q=q_fun,
        alpha=alpha,
        x0=ode.x0,
        tau_max=float(tau_max),
        p_deriv=p_deriv,
        q_deriv=q_deriv,
    )


def check_alpha_one_reduction(
    ode: ClassicalLinearODE, scale: TimeScale, t_grid: UniformGrid
) -> float:
    """Max |rescaled solve at a = 1, mapped back to t| minus |classical|.

    Small values certify that the scale collapses to the ordinary
    equation in the classical limit.
    """
    from .solver import solve_closed_form

    t = t_grid.times
    tau_end = tau_of_t(scale, float(t[-1]), 1.0)
    problem = rescale_problem(ode, scale, FractionalOrder(1.0), tau_max=tau_end * (1 + 1e-9) + 1e-12)
    solution = solve_closed_form(problem)
    taus = np.array([tau_of_t(scale, tk, 1.0) for tk in t])
    mapped = solution.evaluate_many(taus)
    reference = ode.solution(t)
    return float(np.max(np.abs(mapped - reference)))
