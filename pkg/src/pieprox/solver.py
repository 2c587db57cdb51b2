"""Iterative shrinkage-thresholding for 0.5*||Ax - b||^2 + penalty(x).

The iteration is x <- prox(x - mu*(A'A x - A'b)) with the prox applied
coordinatewise through the penalty's single-valued selection.  Stopping
follows the usual relative-change rule e = ||x+ - x|| / (1 + ||x||) <= eps,
capped at maxiter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .penalties import (
    PenaltySpec,
    penalty_value_vec,
    scaled_prox_values,
    weak_convexity_rho,
)
from .pie import PieParams, threshold_bar_tau, pie_prox_values

__all__ = [
    "Problem",
    "IstaConfig",
    "IstaResult",
    "nu_max",
    "mu_max",
    "make_prox_stepper",
    "objective",
    "ista_solve",
]

_POWER_SEED = 0x5EED1E55


@dataclass
class Problem:
    A: np.ndarray
    b: np.ndarray
    penalty: PenaltySpec

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.A.ndim != 2 or self.b.ndim != 1:
            raise ValueError("A must be a matrix and b a vector")
        if self.A.shape[0] != self.b.shape[0]:
            raise ValueError("A and b have inconsistent row counts")
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
            raise ValueError("A and b must be finite")


@dataclass
class IstaConfig:
    mu: float
    eps: float = 1e-5
    maxiter: int = 3000
    x_init: np.ndarray | None = None
    record_objective: bool = True

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.maxiter >= 1:
            raise ValueError("maxiter must be at least 1")


@dataclass
class IstaResult:
    x_final: np.ndarray
    iterations: int
    final_e: float
    objective_trace: list = field(default_factory=list)


def nu_max(A, tol: float = 1e-10, maxiter: int = 5000) -> float:
    """Largest eigenvalue of A'A by power iteration with a fixed start.

    Runs on the smaller Gram side (A'A and AA' share their nonzero
    spectrum) and stops when the Rayleigh quotient stagnates to tol.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or not np.any(A):
        raise ValueError("A must be a nonzero matrix")
    m, n = A.shape
    S = A @ A.T if m <= n else A.T @ A
    rng = np.random.default_rng(_POWER_SEED)
    v = rng.standard_normal(S.shape[0])
    v /= np.linalg.norm(v)
    lam_old = np.inf
    for _ in range(maxiter):
        u = S @ v
        lam = float(v @ u)
        norm_u = np.linalg.norm(u)
        if norm_u == 0.0:
            # v fell in the null space; probability-zero restart
            v = rng.standard_normal(S.shape[0])
            v /= np.linalg.norm(v)
            lam_old = np.inf
            continue
        v = u / norm_u
        if abs(lam - lam_old) <= tol * max(1.0, abs(lam)):
            return lam
        lam_old = lam
    raise RuntimeError("power iteration did not stagnate within %d steps" % maxiter)


def mu_max(A, penalty: PenaltySpec, nu: float | None = None) -> float:
    """Largest provably safe step: 2/(nu_max + rho), or 2/nu_max when the
    penalty has no weak-convexity constant (hard, half, CaP)."""
    if nu is None:
        nu = nu_max(A)
    rho = weak_convexity_rho(penalty)
    if rho is None:
        return 2.0 / nu
    return 2.0 / (nu + rho)


def make_prox_stepper(penalty: PenaltySpec, mu: float):
    """Coordinatewise prox of mu*penalty as a reusable closure.

    For the exponential penalty the jump threshold depends only on
    (mu*lam, sigma), so it is resolved once here rather than per call.
    """
    if penalty.kind == "pie":
        p = PieParams(mu=mu, lam=penalty.lam, sigma=penalty.shape)
        thr = threshold_bar_tau(p) if p.ratio > 1.0 else None

        def step(z):
            return pie_prox_values(z, p, thr=thr)

        return step

    def step(z):
        return scaled_prox_values(penalty, mu, z)

    return step


def objective(prob: Problem, x) -> float:
    """0.5*||Ax - b||^2 plus the summed penalty (weight included)."""
    x = np.asarray(x, dtype=np.float64)
    r = prob.A @ x - prob.b
    return 0.5 * float(r @ r) + float(np.sum(penalty_value_vec(prob.penalty, x)))


def ista_solve(prob: Problem, cfg: IstaConfig) -> IstaResult:
    """Run the iteration until e <= eps or maxiter; returns the trace too.

    The Gram matrix and A'b are formed once; the per-iteration work is one
    Gram matvec plus the coordinatewise prox.
    """
    n = prob.A.shape[1]
    if cfg.x_init is None:
        x = np.zeros(n)
    else:
        x = np.array(cfg.x_init, dtype=np.float64)
        if x.shape != (n,):
            raise ValueError("x_init has the wrong length")
    G = prob.A.T @ prob.A
    Atb = prob.A.T @ prob.b
    step = make_prox_stepper(prob.penalty, cfg.mu)
    trace = [objective(prob, x)] if cfg.record_objective else []
    e = np.inf
    iters = 0
    while e > cfg.eps and iters < cfg.maxiter:
        z = x - cfg.mu * (G @ x - Atb)
        x_new = step(z)
        e = float(np.linalg.norm(x_new - x) / (1.0 + np.linalg.norm(x)))
        x = x_new
        iters += 1
        if cfg.record_objective:
            trace.append(objective(prob, x))
    return IstaResult(x_final=x, iterations=iters, final_e=e, objective_trace=trace)
