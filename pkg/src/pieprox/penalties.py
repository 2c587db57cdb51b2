"""Separable sparsity penalties and their proximal operators.

Nine penalty kinds: the exponential penalty ("pie") plus soft, hard, half,
SCAD, MCP, Log, TL1, and CaP.  The closed-form prox of each penalty is
stated for unit prox weight; prox_scalar takes an effective weight w and
evaluates the prox of w*f, i.e. argmin_x w*f(x) + (x - x0)^2 / 2, where f
is the penalty formula with its regularization parameter replaced by w.

For SCAD and MCP that substitution is NOT the same thing as the prox of
mu*(penalty with weight lam) when mu != 1, because those two penalties are
not linear in their regularization parameter.  The solver therefore uses
the dedicated scaled_prox_values below for its prox step; prox_scalar keeps
the plain-substitution semantics of the closed-form tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pie import PieParams, ProxSet, _proxset, prox_pie, pie_prox_values

__all__ = [
    "KINDS",
    "PenaltySpec",
    "penalty_value",
    "penalty_value_vec",
    "prox_scalar",
    "prox_values",
    "scaled_prox_values",
    "log_prox_breakpoint",
    "weak_convexity_rho",
]

KINDS = ("pie", "soft", "hard", "half", "scad", "mcp", "log", "tl1", "cap")

_SHAPE_RULES = {
    "pie": ("sigma", lambda a: a > 0, "sigma > 0"),
    "scad": ("a", lambda a: a > 2, "a > 2"),
    "mcp": ("a", lambda a: a > 1, "a > 1"),
    "log": ("a", lambda a: a > 0, "a > 0"),
    "tl1": ("a", lambda a: a > 0, "a > 0"),
    "cap": ("a", lambda a: a > 0, "a > 0"),
}


@dataclass(frozen=True)
class PenaltySpec:
    """One penalty kind with its weight lam and optional shape parameter.

    shape is sigma for "pie", a for scad/mcp/log/tl1/cap, and must be None
    for soft/hard/half.
    """

    kind: str
    lam: float
    shape: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).lower())
        if self.kind not in KINDS:
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError("lam must be a finite positive real")
        rule = _SHAPE_RULES.get(self.kind)
        if rule is None:
            if self.shape is not None:
                raise ValueError(f"{self.kind} takes no shape parameter")
        else:
            name, ok, desc = rule
            if self.shape is None or not math.isfinite(self.shape) or not ok(self.shape):
                raise ValueError(f"{self.kind} requires {name} with {desc}")


def penalty_value_vec(spec: PenaltySpec, x) -> np.ndarray:
    """Penalty value elementwise; even, nonnegative, zero at the origin."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    lam, a = spec.lam, spec.shape
    if spec.kind == "pie":
        return lam * -np.expm1(-ax / a)
    if spec.kind == "soft":
        return lam * ax
    if spec.kind == "hard":
        return lam * (ax != 0.0).astype(np.float64)
    if spec.kind == "half":
        return lam * np.sqrt(ax)
    if spec.kind == "scad":
        return np.where(
            ax <= lam,
            lam * ax,
            np.where(
                ax <= a * lam,
                (-(ax**2) + 2.0 * a * lam * ax - lam**2) / (2.0 * (a - 1.0)),
                (a + 1.0) * lam**2 / 2.0,
            ),
        )
    if spec.kind == "mcp":
        return np.where(ax <= a * lam, lam * ax - ax**2 / (2.0 * a), a * lam**2 / 2.0)
    if spec.kind == "log":
        return lam * np.log1p(ax / a)
    if spec.kind == "tl1":
        return lam * (a + 1.0) * ax / (a + ax)
    if spec.kind == "cap":
        return lam * np.minimum(ax, a)
    raise AssertionError(spec.kind)


def penalty_value(spec: PenaltySpec, x: float) -> float:
    return float(penalty_value_vec(spec, np.array([float(x)]))[0])


def weak_convexity_rho(spec: PenaltySpec):
    """Smallest rho making the penalty plus (rho/2)x^2 convex, or None.

    hard, half, and CaP are not weakly convex for any rho, hence None.
    """
    lam, a = spec.lam, spec.shape
    if spec.kind == "pie":
        return lam / a**2
    if spec.kind == "soft":
        return 0.0
    if spec.kind == "scad":
        return 1.0 / (a - 1.0)
    if spec.kind == "mcp":
        return 1.0 / a
    if spec.kind == "log":
        return lam / a**2
    if spec.kind == "tl1":
        return 2.0 * (a + 1.0) * lam / a**2
    return None


def log_prox_breakpoint(w: float, a: float, tol: float = 1e-12) -> float:
    """Jump location of the Log prox when sqrt(w) > a.

    The root xbar in [2*sqrt(w) - a, w/a] of

        r(x)^2/2 - x*r(x) + w*log(1 + r(x)/a) = 0,
        r(x) = (x - a)/2 + sqrt((x + a)^2/4 - w)

    i.e. the input at which the zero branch and the r branch have equal
    objective.  Bisection; the bracket endpoints have opposite signs.
    """
    if not (w > 0 and a > 0):
        raise ValueError("w and a must be positive")
    if math.sqrt(w) <= a:
        raise ValueError("breakpoint only exists for sqrt(w) > a")

    def gap(x0):
        r = _log_r_scalar(x0, w, a)
        return 0.5 * r * r - x0 * r + w * math.log1p(r / a)

    lo, hi = 2.0 * math.sqrt(w) - a, w / a
    # gap > 0 at lo (zero wins), gap < 0 at hi (r wins)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _log_r_scalar(x0: float, w: float, a: float) -> float:
    disc = (x0 + a) ** 2 / 4.0 - w
    # r vanishes by cancellation at the no-jump threshold x0 = w/a; clamp
    # the roundoff residue
    return max((x0 - a) / 2.0 + math.sqrt(max(disc, 0.0)), 0.0)


def _half_nonzero(ax, w):
    # closed form for |x0| >= (3/2) w^(2/3); the arccos argument touches -1
    # exactly at the threshold, so clip against roundoff
    c = np.clip(-(3.0 ** 1.5) / 4.0 * w * ax ** (-1.5), -1.0, 1.0)
    return 2.0 / 3.0 * ax * (1.0 + np.cos(2.0 / 3.0 * np.arccos(c)))


def _tl1_g(ax, w, a):
    c = np.clip(1.0 - 27.0 * w * a * (a + 1.0) / (2.0 * (a + ax) ** 3), -1.0, 1.0)
    g = 2.0 / 3.0 * (a + ax) * np.cos(np.arccos(c) / 3.0) - 2.0 * a / 3.0 + ax / 3.0
    # g cancels to exactly 0 at the no-jump threshold; keep roundoff from
    # turning that into a negative value
    return np.maximum(g, 0.0)


def _tl1_threshold(w, a):
    if w <= a * a / (2.0 * (a + 1.0)):
        return w * (a + 1.0) / a, False
    return math.sqrt(2.0 * w * (a + 1.0)) - a / 2.0, True


def prox_scalar(spec: PenaltySpec, w: float, x0: float) -> ProxSet:
    """Minimizer set of w*f(x) + (x - x0)^2/2 with f's parameter set to w.

    Two-valued ties are listed ascending and occur only at exact floating
    equality with the relevant threshold.
    """
    if not (math.isfinite(w) and w > 0):
        raise ValueError("effective weight w must be a finite positive real")
    x0 = float(x0)
    if not math.isfinite(x0):
        raise ValueError("x0 must be finite")
    a = spec.shape
    ax = abs(x0)
    s = -1.0 if x0 < 0 else 1.0

    if spec.kind == "pie":
        return prox_pie(x0, PieParams(mu=1.0, lam=w, sigma=a))

    if spec.kind == "soft":
        if ax <= w:
            return _proxset(0.0)
        return _proxset(x0 - s * w)

    if spec.kind == "hard":
        t = math.sqrt(2.0 * w)
        if ax < t:
            return _proxset(0.0)
        if ax == t:
            return _proxset(0.0, x0)
        return _proxset(x0)

    if spec.kind == "half":
        t = 1.5 * w ** (2.0 / 3.0)
        if ax < t:
            return _proxset(0.0)
        v = s * float(_half_nonzero(np.float64(ax), w))
        if ax == t:
            return _proxset(0.0, v)
        return _proxset(v)

    if spec.kind == "scad":
        if ax <= 2.0 * w:
            return _proxset(s * max(ax - w, 0.0))
        if ax <= a * w:
            return _proxset(((a - 1.0) * x0 - s * a * w) / (a - 2.0))
        return _proxset(x0)

    if spec.kind == "mcp":
        if ax <= a * w:
            return _proxset(s * max(ax - w, 0.0) / (1.0 - 1.0 / a))
        return _proxset(x0)

    if spec.kind == "log":
        if math.sqrt(w) <= a:
            if ax <= w / a:
                return _proxset(0.0)
            return _proxset(s * _log_r_scalar(ax, w, a))
        xbar = log_prox_breakpoint(w, a)
        if ax < xbar:
            return _proxset(0.0)
        v = s * _log_r_scalar(ax, w, a)
        if ax == xbar:
            return _proxset(0.0, v)
        return _proxset(v)

    if spec.kind == "tl1":
        t, jumps = _tl1_threshold(w, a)
        if jumps:
            if ax < t:
                return _proxset(0.0)
            if ax == t:
                return _proxset(0.0, s * (math.sqrt(2.0 * w * (a + 1.0)) - a))
            return _proxset(s * float(_tl1_g(np.float64(ax), w, a)))
        if ax <= t:
            return _proxset(0.0)
        return _proxset(s * float(_tl1_g(np.float64(ax), w, a)))

    if spec.kind == "cap":
        if w <= 2.0 * a:
            # the w = 2a boundary belongs here; the two regimes' thresholds
            # coincide there (a + w/2 = 2a = sqrt(2*a*w))
            if ax < w:
                return _proxset(0.0)
            if ax < a + w / 2.0:
                return _proxset(x0 - s * w)
            if ax == a + w / 2.0:
                return _proxset(x0 - s * w, x0)
            return _proxset(x0)
        t = math.sqrt(2.0 * a * w)
        if ax < t:
            return _proxset(0.0)
        if ax == t:
            return _proxset(0.0, x0)
        return _proxset(x0)

    raise AssertionError(spec.kind)


def prox_values(spec: PenaltySpec, w: float, x0) -> np.ndarray:
    """Vectorized single-valued prox of w*f: ties resolve to the
    largest-magnitude element, matching ProxSet.select()."""
    if not (math.isfinite(w) and w > 0):
        raise ValueError("effective weight w must be a finite positive real")
    x0 = np.asarray(x0, dtype=np.float64)
    a = spec.shape
    ax = np.abs(x0)
    s = np.sign(x0)

    if spec.kind == "pie":
        return pie_prox_values(x0, PieParams(mu=1.0, lam=w, sigma=a))

    if spec.kind == "soft":
        return s * np.maximum(ax - w, 0.0)

    if spec.kind == "hard":
        return np.where(ax >= math.sqrt(2.0 * w), x0, 0.0)

    if spec.kind == "half":
        t = 1.5 * w ** (2.0 / 3.0)
        out = np.zeros_like(ax)
        nz = ax >= t
        if np.any(nz):
            out[nz] = _half_nonzero(ax[nz], w)
        return s * out

    if spec.kind == "scad":
        soft = np.maximum(ax - w, 0.0)
        mid = ((a - 1.0) * ax - a * w) / (a - 2.0)
        return s * np.where(ax <= 2.0 * w, soft, np.where(ax <= a * w, mid, ax))

    if spec.kind == "mcp":
        return s * np.where(
            ax <= a * w, np.maximum(ax - w, 0.0) / (1.0 - 1.0 / a), ax
        )

    if spec.kind == "log":
        out = np.zeros_like(ax)
        if math.sqrt(w) <= a:
            nz = ax > w / a
        else:
            nz = ax >= log_prox_breakpoint(w, a)
        if np.any(nz):
            axn = ax[nz]
            disc = np.clip((axn + a) ** 2 / 4.0 - w, 0.0, None)
            out[nz] = np.maximum((axn - a) / 2.0 + np.sqrt(disc), 0.0)
        return s * out

    if spec.kind == "tl1":
        t, jumps = _tl1_threshold(w, a)
        out = np.zeros_like(ax)
        nz = ax >= t if jumps else ax > t
        if np.any(nz):
            out[nz] = _tl1_g(ax[nz], w, a)
        return s * out

    if spec.kind == "cap":
        if w <= 2.0 * a:
            return s * np.where(
                ax < w, 0.0, np.where(ax < a + w / 2.0, ax - w, ax)
            )
        return np.where(ax >= math.sqrt(2.0 * a * w), x0, 0.0)

    raise AssertionError(spec.kind)


def scaled_prox_values(spec: PenaltySpec, mu: float, x0) -> np.ndarray:
    """Vectorized prox of mu times the penalty: argmin mu*f(x) + (x-x0)^2/2.

    For every kind whose formula is linear in lam this is prox_values with
    w = mu*lam.  SCAD and MCP are not, so they get their own closed forms
    (derived from the same stationarity analysis; they reduce to the table
    forms at mu = 1).  The solver prox step needs the exact scaled prox,
    otherwise the descent property of the iteration breaks.
    """
    if not (math.isfinite(mu) and mu > 0):
        raise ValueError("mu must be a finite positive real")
    lam, a = spec.lam, spec.shape

    if spec.kind == "scad":
        if mu >= a - 1.0:
            raise ValueError("scaled SCAD prox needs mu < a - 1")
        x0 = np.asarray(x0, dtype=np.float64)
        ax = np.abs(x0)
        s = np.sign(x0)
        t = mu * lam
        soft = np.maximum(ax - t, 0.0)
        mid = ((a - 1.0) * ax - a * t) / (a - 1.0 - mu)
        return s * np.where(ax <= lam + t, soft, np.where(ax <= a * lam, mid, ax))

    if spec.kind == "mcp":
        if mu >= a:
            raise ValueError("scaled MCP prox needs mu < a")
        x0 = np.asarray(x0, dtype=np.float64)
        ax = np.abs(x0)
        s = np.sign(x0)
        t = mu * lam
        return s * np.where(
            ax <= a * lam, np.maximum(ax - t, 0.0) / (1.0 - mu / a), ax
        )

    if spec.kind == "pie":
        return pie_prox_values(x0, PieParams(mu=mu, lam=lam, sigma=a))

    return prox_values(spec, mu * lam, x0)
