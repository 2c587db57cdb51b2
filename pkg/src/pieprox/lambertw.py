"""Real branches of the Lambert W function.

Evaluates the principal branch W0 on [-1/e, inf) and the secondary branch
W-1 on [-1/e, 0), which is all the exponential-penalty proximal operator
needs.  Each branch uses a cheap regional initial guess (series about the
branch point, log asymptotics elsewhere) polished by Halley iteration.

The scalar functions are thin wrappers over the array versions, so scalar
and vectorized callers see bit-identical results.
"""

from __future__ import annotations

import math

import numpy as np

# Branch point -1/e.  Arguments that undershoot it by at most CLAMP_TOL are
# clamped (they arise from roundoff in -r*exp(-|x0|/sigma) when the theory
# guarantees membership in [-1/e, 0)); anything lower is a domain error.
BRANCH_POINT = -math.exp(-1.0)
CLAMP_TOL = 1e-12

_MAX_ITER = 40
_STEP_TOL = 1e-15
_RES_TOL = 1e-14


def _initial_w0(x):
    # log1p is valid on the whole domain (x >= -1/e > -1), so start there
    # and overwrite the two regions where a better guess is prescribed
    w = np.log1p(x)
    near = x < -0.25
    if np.any(near):
        # series about the branch point in p = sqrt(2(e*x + 1)); the clip
        # guards the radicand against going -0.0-negative at the clamped point
        p = np.sqrt(np.clip(2.0 * (np.e * x[near] + 1.0), 0.0, None))
        w[near] = -1.0 + p * (1.0 - p / 3.0)
    far = x >= 3.0
    if np.any(far):
        lx = np.log(x[far])
        w[far] = lx - np.log(lx)
    return w


def _initial_wm1(x):
    w = np.empty_like(x)
    near = x < -0.25
    if np.any(near):
        p = np.sqrt(np.clip(2.0 * (np.e * x[near] + 1.0), 0.0, None))
        w[near] = -1.0 - p * (1.0 + p / 3.0)
    far = ~near
    if np.any(far):
        a = np.log(-x[far])
        w[far] = a - np.log(-a)
    return w


def _halley_step(wa, xa, res_tol_a):
    # Buffer-reusing transcription of
    #   ew = exp(w); f = w*ew - x; wp1 = w + 1
    #   step = f / (ew*wp1 - (w + 2)*f / (2*wp1)); w -= step
    # This is the hot loop of the whole package, so every full-size
    # temporary it avoids matters; the operations and their order per lane
    # are unchanged, so results stay bit-identical to the naive form.
    # Mutates wa in place.
    ew = np.exp(wa)
    f = wa * ew
    np.subtract(f, xa, out=f)
    wp1 = wa + 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = ew * wp1
        np.add(wa, 2.0, out=ew)  # ew buffer is free from here on
        np.multiply(ew, f, out=ew)
        np.multiply(wp1, 2.0, out=wp1)
        np.divide(ew, wp1, out=ew)
        np.subtract(denom, ew, out=denom)
        step = np.divide(f, denom, out=denom)
    # f == 0 happens at the exact branch point where wp1 == 0 as well
    np.copyto(step, 0.0, where=(f == 0.0))
    np.copyto(step, 0.0, where=~np.isfinite(step))
    np.subtract(wa, step, out=wa)
    # done = |step| <= tol*(1 + |w|)  or  |f| <= res_tol
    np.absolute(f, out=f)
    done = f <= res_tol_a
    np.absolute(step, out=step)
    np.absolute(wa, out=f)  # f buffer is free from here on
    np.add(f, 1.0, out=f)
    np.multiply(f, _STEP_TOL, out=f)
    np.logical_or(done, step <= f, out=done)
    return wa, done


def _halley(w, x):
    """Polish w in place so that w*exp(w) = x, freezing converged entries.

    The first sweep touches every entry, so it runs on the full arrays;
    later sweeps compress down to the still-active entries.
    """
    res_tol = np.absolute(x)
    np.maximum(res_tol, 1.0, out=res_tol)
    np.multiply(res_tol, _RES_TOL, out=res_tol)
    w, done = _halley_step(w, x, res_tol)
    active = ~done
    for _ in range(_MAX_ITER - 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        wa, done = _halley_step(w[idx], x[idx], res_tol[idx])
        w[idx] = wa
        active[idx[done]] = False
    return w


def _validated(x, branch):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("Lambert W argument must be finite")
    if np.any(x < BRANCH_POINT - CLAMP_TOL):
        raise ValueError(
            "Lambert W argument below the branch point -1/e by more than %g"
            % CLAMP_TOL
        )
    if branch == -1 and np.any(x >= 0.0):
        raise ValueError("W_{-1} is only defined on [-1/e, 0)")
    return np.maximum(x, BRANCH_POINT)


def _w0_clamped(xc):
    # Internal entry for callers whose argument is already a float64 array,
    # finite by construction, and clamped to [-1/e, inf); skips validation.
    w = _halley(_initial_w0(xc), xc)
    return np.maximum(w, -1.0, out=w)


def w0_array(x):
    """Principal branch W0 >= -1, elementwise over x in [-1/e, inf)."""
    return _w0_clamped(_validated(x, 0))


def wm1_array(x):
    """Secondary branch W-1 <= -1, elementwise over x in [-1/e, 0)."""
    xc = _validated(x, -1)
    w = _halley(_initial_wm1(xc), xc)
    return np.minimum(w, -1.0, out=w)


def w0(x: float) -> float:
    """W0(x) for a scalar x >= -1/e (clamped within 1e-12 below)."""
    return float(w0_array(np.array([float(x)]))[0])


def wm1(x: float) -> float:
    """W-1(x) for a scalar x in [-1/e, 0)."""
    return float(wm1_array(np.array([float(x)]))[0])
