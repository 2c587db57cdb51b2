"""Proximal operator of the exponential penalty lam*(1 - exp(-|x|/sigma)).

For a scalar x0 the prox solves

    min_x  lam*(1 - exp(-|x|/sigma)) + (x - x0)^2 / (2*mu)

which by symmetry reduces to the half-line problem in |x0|.  The minimizer
set T(x0) of the half-line problem has three equivalent characterizations
when r = mu*lam/sigma^2 > 1:

  * t_operator          -- jump threshold tau_bar, computed once by bisection
  * t_operator_refined  -- objective comparison restricted to a narrow band
  * t_operator_baseline -- the older formula that compares objectives for
                           every |x0| >= sigma*(1 + ln r); kept verbatim,
                           including its defect: for r <= 1 it can return a
                           negative "minimizer" that violates x >= 0

and a single closed form when r <= 1 (t_operator handles both regimes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lambertw import BRANCH_POINT, _w0_clamped, w0

__all__ = [
    "PieParams",
    "ProxSet",
    "ThresholdResult",
    "objective_L",
    "L_derivatives",
    "x1_candidate",
    "threshold_bar_tau",
    "t_operator",
    "t_operator_refined",
    "t_operator_baseline",
    "prox_pie",
    "prox_pie_select",
    "iota_constant",
    "pie_prox_values",
    "t_values_threshold",
    "t_values_refined",
    "t_values_baseline",
]


def _check_finite_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a finite positive real, got {value!r}")


@dataclass(frozen=True)
class PieParams:
    """The triple (mu, lam, sigma) of positive reals; lam is the penalty weight."""

    mu: float
    lam: float
    sigma: float

    def __post_init__(self):
        _check_finite_positive("mu", self.mu)
        _check_finite_positive("lam", self.lam)
        _check_finite_positive("sigma", self.sigma)
        if not math.isfinite(self.mu * self.lam / self.sigma**2):
            raise ValueError("mu*lam/sigma^2 overflows")

    @property
    def ratio(self) -> float:
        """Regime ratio r = mu*lam/sigma^2; r <= 1 and r > 1 behave differently."""
        return self.mu * self.lam / self.sigma**2


@dataclass(frozen=True)
class ProxSet:
    """Minimizer set at one scalar: one or two values, ascending."""

    values: tuple

    def __post_init__(self):
        if not 1 <= len(self.values) <= 2:
            raise ValueError("a prox set has one or two elements")
        if len(self.values) == 2 and not self.values[0] < self.values[1]:
            raise ValueError("two-valued prox sets must be strictly ascending")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def select(self) -> float:
        """Deterministic single-valued selection: the largest-magnitude element.

        At a two-valued tie this picks the nonzero (larger in magnitude)
        element, matching the right-continuous convention of the hard
        thresholding limit.
        """
        return max(self.values, key=abs)


def _proxset(*values) -> ProxSet:
    vals = sorted(set(float(v) for v in values))
    return ProxSet(tuple(vals))


@dataclass(frozen=True)
class ThresholdResult:
    """Minimizer x_star of H and the jump threshold bar_tau it determines."""

    x_star: float
    bar_tau: float
    iterations: int


def _validate_x0(x0) -> float:
    x0 = float(x0)
    if not math.isfinite(x0):
        raise ValueError(f"x0 must be finite, got {x0!r}")
    return x0


def objective_L(x: float, x0: float, p: PieParams) -> float:
    """The half-line objective lam*(1-exp(-x/sigma)) + (x-|x0|)^2/(2*mu).

    Defined for any real x (negative x makes the exponential term negative,
    which is exactly how the baseline formula's defect shows up).
    """
    return p.lam * -math.expm1(-x / p.sigma) + (x - abs(x0)) ** 2 / (2.0 * p.mu)


def _objective_vec(x, ax0, p: PieParams):
    return p.lam * -np.expm1(-x / p.sigma) + (x - ax0) ** 2 / (2.0 * p.mu)


def L_derivatives(x: float, x0: float, p: PieParams):
    """First three derivatives of the half-line objective at x (intended x > 0)."""
    ex = math.exp(-x / p.sigma)
    d1 = p.lam / p.sigma * ex + (x - abs(x0)) / p.mu
    d2 = -p.lam / p.sigma**2 * ex + 1.0 / p.mu
    d3 = p.lam / p.sigma**3 * ex
    return d1, d2, d3


def x1_candidate(x0: float, p: PieParams) -> float:
    """The stationary point x1 = sigma*W0(-r*exp(-|x0|/sigma)) + |x0|.

    Raises a domain error (from the Lambert W evaluation) if the argument
    falls below -1/e by more than the clamp tolerance, which happens exactly
    when |x0| is too far below sigma*(1 + ln r).
    """
    x0 = _validate_x0(x0)
    arg = -p.ratio * math.exp(-abs(x0) / p.sigma)
    return p.sigma * w0(arg) + abs(x0)


def _x1_vec(ax0, p: PieParams):
    # Clamp to the branch point: callers only consume lanes where the
    # formula is valid, but the vector evaluation runs on every lane.
    # Buffer-reusing transcription of
    #   sigma * W0(max(-ratio * exp(-ax0/sigma), BRANCH_POINT)) + ax0
    # (hot path; same operations in the same order, so bit-identical).
    arg = np.negative(ax0)
    np.divide(arg, p.sigma, out=arg)
    np.exp(arg, out=arg)
    np.multiply(arg, -p.ratio, out=arg)
    np.maximum(arg, BRANCH_POINT, out=arg)
    w = _w0_clamped(arg)
    np.multiply(w, p.sigma, out=w)
    np.add(w, ax0, out=w)
    return w


def _h_prime(x: float, p: PieParams) -> float:
    # H'(x) = 1/2 + mu*lam*((x/sigma + 1)*exp(-x/sigma) - 1)/x^2, written as
    # expm1(-t) + t*exp(-t) to dodge the cancellation at small x
    t = x / p.sigma
    return 0.5 + p.mu * p.lam * (math.expm1(-t) + t * math.exp(-t)) / x**2


def threshold_bar_tau(p: PieParams) -> ThresholdResult:
    """Minimize H(x) = x/2 + mu*lam*(1-exp(-x/sigma))/x over x > 0 by bisection.

    Requires r = mu*lam/sigma^2 > 1 (otherwise there is no jump and no
    threshold).  Returns the stationary point x_star in (0, sqrt(2*mu*lam))
    and bar_tau = x_star + (mu*lam/sigma)*exp(-x_star/sigma).
    """
    if p.ratio <= 1.0:
        raise ValueError(
            "threshold only exists for mu*lam/sigma^2 > 1, got %g" % p.ratio
        )
    mulam = p.mu * p.lam
    hi = math.sqrt(2.0 * mulam)
    lo = 1e-12 * hi
    # H'(0+) = (1 - r)/2 < 0, but make sure the numeric bracket agrees
    while _h_prime(lo, p) >= 0.0:
        lo *= 0.5
        if lo == 0.0:
            raise RuntimeError("failed to bracket the threshold stationary point")
    iterations = 0
    tol = 1e-14 * hi
    while hi - lo > tol and iterations < 200:
        mid = 0.5 * (lo + hi)
        if _h_prime(mid, p) < 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    x_star = 0.5 * (lo + hi)
    bar_tau = x_star + mulam / p.sigma * math.exp(-x_star / p.sigma)
    return ThresholdResult(x_star=x_star, bar_tau=bar_tau, iterations=iterations)


def t_operator(x0: float, p: PieParams, thr: ThresholdResult | None = None) -> ProxSet:
    """Minimizer set of the half-line problem at |x0|, both regimes.

    For r <= 1 the set is {0} when |x0| <= mu*lam/sigma and {x1} otherwise.
    For r > 1 it is {0} below the threshold, {x1} above, and the two-valued
    tie {0, x1} at exact floating equality |x0| = bar_tau.  A precomputed
    ThresholdResult can be passed to skip the bisection.
    """
    x0 = _validate_x0(x0)
    ax = abs(x0)
    if p.ratio <= 1.0:
        if ax <= p.mu * p.lam / p.sigma:
            return _proxset(0.0)
        return _proxset(x1_candidate(ax, p))
    if thr is None:
        thr = threshold_bar_tau(p)
    if ax < thr.bar_tau:
        return _proxset(0.0)
    x1 = x1_candidate(ax, p)
    if ax == thr.bar_tau:
        return _proxset(0.0, x1)
    return _proxset(x1)


def t_operator_refined(x0: float, p: PieParams) -> ProxSet:
    """Band form of the r > 1 operator: compare objectives only on the band
    [sigma*(1+ln r), min(mu*lam/sigma, sqrt(2*mu*lam))]."""
    if p.ratio <= 1.0:
        raise ValueError("band form requires mu*lam/sigma^2 > 1, got %g" % p.ratio)
    x0 = _validate_x0(x0)
    ax = abs(x0)
    lo = p.sigma * (1.0 + math.log(p.ratio))
    hi = min(p.mu * p.lam / p.sigma, math.sqrt(2.0 * p.mu * p.lam))
    if ax < lo:
        return _proxset(0.0)
    x1 = x1_candidate(ax, p)
    if ax > hi:
        return _proxset(x1)
    l1 = objective_L(x1, ax, p)
    l0 = ax * ax / (2.0 * p.mu)
    if l1 < l0:
        return _proxset(x1)
    if l1 == l0:
        return _proxset(0.0, x1)
    return _proxset(0.0)


def t_operator_baseline(x0: float, p: PieParams) -> ProxSet:
    """The older comparison-everywhere formula, implemented verbatim.

    Correct for r > 1, wrong for r <= 1: whenever |x0| >= sigma*(1 + ln r)
    it compares objectives at 0 and at x1 even though x1 may be negative,
    and returns the negative value when its objective is lower.  Kept for
    the regression test and as the timing baseline.
    """
    x0 = _validate_x0(x0)
    ax = abs(x0)
    if ax < p.sigma * (1.0 + math.log(p.ratio)):
        return _proxset(0.0)
    x1 = x1_candidate(ax, p)
    l1 = objective_L(x1, ax, p)
    l0 = ax * ax / (2.0 * p.mu)
    if l1 > l0:
        return _proxset(0.0)
    if l1 == l0:
        return _proxset(0.0, x1)
    return _proxset(x1)


def prox_pie(x0: float, p: PieParams, thr: ThresholdResult | None = None) -> ProxSet:
    """Full-line prox: sign(x0) * T(|x0|), elementwise on the set."""
    x0 = _validate_x0(x0)
    half = t_operator(abs(x0), p, thr=thr)
    if x0 >= 0.0:
        return half
    return _proxset(*(-v for v in half))


def prox_pie_select(
    x0: float, p: PieParams, thr: ThresholdResult | None = None
) -> float:
    """Single-valued prox for solver use; ties resolve to the nonzero element."""
    return prox_pie(x0, p, thr).select()


def iota_constant(tol: float = 1e-12) -> float:
    """Root of sqrt(2)*t - 2*ln(t) - 2 = 0 on (sqrt(2), 4*sqrt(2)), about 2.93868.

    Separates the parameter range where the lower bracket for x1 at
    sqrt(2*mu*lam) switches between sigma*ln(r) and sqrt(2*mu*lam)-2*sigma.
    """
    f = lambda t: math.sqrt(2.0) * t - 2.0 * math.log(t) - 2.0
    lo, hi = math.sqrt(2.0), 4.0 * math.sqrt(2.0)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Vectorized single-valued evaluations (solver and timing paths).  All three
# r > 1 formulas below normalize two-valued ties to the nonzero element, so
# their outputs are comparable elementwise.


def t_values_threshold(x0, p: PieParams, thr: ThresholdResult) -> np.ndarray:
    """Selected prox values via the precomputed threshold (r > 1)."""
    x0 = np.asarray(x0, dtype=np.float64)
    ax = np.abs(x0)
    out = np.zeros_like(ax)
    idx = np.flatnonzero(ax >= thr.bar_tau)
    if idx.size:
        out[idx] = _x1_vec(ax[idx], p)
    return np.copysign(out, x0)


def _keep_x1(x1, ax0, p: PieParams):
    # the printed comparison: keep x1 unless the objective at 0 is strictly
    # smaller (both sides evaluated through the objective, as written)
    return _objective_vec(x1, ax0, p) <= _objective_vec(0.0, ax0, p)


def t_values_refined(x0, p: PieParams) -> np.ndarray:
    """Selected prox values via the band formula (r > 1): x1 everywhere at or
    above sigma*(1 + ln r), with the objective comparison deciding only the
    band up to min(mu*lam/sigma, sqrt(2*mu*lam))."""
    if p.ratio <= 1.0:
        raise ValueError("band form requires mu*lam/sigma^2 > 1")
    x0 = np.asarray(x0, dtype=np.float64)
    ax = np.abs(x0)
    lo = p.sigma * (1.0 + math.log(p.ratio))
    hi = min(p.mu * p.lam / p.sigma, math.sqrt(2.0 * p.mu * p.lam))
    out = np.zeros_like(ax)
    idx = np.flatnonzero(ax >= lo)
    if idx.size:
        axm = ax[idx]
        x1 = _x1_vec(axm, p)
        bm = np.flatnonzero(axm <= hi)
        axb = axm[bm]
        x1b = x1[bm]
        x1[bm] = np.where(_keep_x1(x1b, axb, p), x1b, 0.0)
        out[idx] = x1
    return np.copysign(out, x0)


def t_values_baseline(x0, p: PieParams) -> np.ndarray:
    """Selected prox values via the comparison-everywhere baseline."""
    x0 = np.asarray(x0, dtype=np.float64)
    ax = np.abs(x0)
    out = np.zeros_like(ax)
    idx = np.flatnonzero(ax >= p.sigma * (1.0 + math.log(p.ratio)))
    if idx.size:
        axm = ax[idx]
        x1 = _x1_vec(axm, p)
        out[idx] = np.where(_keep_x1(x1, axm, p), x1, 0.0)
    return np.copysign(out, x0)


def pie_prox_values(
    x0, p: PieParams, thr: ThresholdResult | None = None
) -> np.ndarray:
    """Selected full-line prox values for an array x0, both regimes."""
    x0 = np.asarray(x0, dtype=np.float64)
    if p.ratio <= 1.0:
        ax = np.abs(x0)
        out = np.zeros_like(ax)
        idx = np.flatnonzero(ax > p.mu * p.lam / p.sigma)
        if idx.size:
            out[idx] = _x1_vec(ax[idx], p)
        return np.copysign(out, x0)
    if thr is None:
        thr = threshold_bar_tau(p)
    return t_values_threshold(x0, p, thr)
