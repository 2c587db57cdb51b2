"""Sensing matrices, sparse test signals, and recovery metrics.

Two matrix ensembles: column-normalized Gaussian, and a randomly
oversampled partial DCT with per-row frequencies xi_i ~ U[0,1],

    A_ij = cos(2*(j-1)*pi*xi_i / F) / sqrt(m),

also column-normalized.  Signals have an exactly-k uniform random support
with amplitudes uniform on [amp_lo, amp_hi].
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatrixKind",
    "SignalSpec",
    "gen_matrix",
    "mutual_coherence",
    "gen_signal",
    "relative_error",
    "is_success",
    "trial_seeds",
    "matrix_to_csv",
    "vector_to_csv",
]


@dataclass(frozen=True)
class MatrixKind:
    kind: str
    F: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", str(self.kind).lower())
        if self.kind not in ("gaussian", "dct"):
            raise ValueError("matrix kind must be 'gaussian' or 'dct'")
        if self.kind == "dct" and (int(self.F) != self.F or self.F < 1):
            raise ValueError("DCT refinement factor F must be an integer >= 1")

    @classmethod
    def gaussian(cls):
        return cls("gaussian")

    @classmethod
    def dct(cls, F: int):
        return cls("dct", F)


@dataclass(frozen=True)
class SignalSpec:
    n: int
    k: int
    amp_lo: float = -5.0
    amp_hi: float = 5.0
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.k <= self.n:
            raise ValueError("need 0 < k <= n")
        if not self.amp_lo < self.amp_hi:
            raise ValueError("need amp_lo < amp_hi")


def _draw_raw(kind: MatrixKind, m: int, n: int, rng) -> np.ndarray:
    if kind.kind == "gaussian":
        return rng.standard_normal((m, n))
    xi = rng.uniform(0.0, 1.0, size=m)
    j = np.arange(n, dtype=np.float64)
    return np.cos(2.0 * np.pi * np.outer(xi, j) / kind.F) / math.sqrt(m)


def gen_matrix(kind: MatrixKind, m: int, n: int, seed: int) -> np.ndarray:
    """Draw the ensemble and normalize every column to unit l2 norm."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(8):
        A = _draw_raw(kind, m, n, rng)
        norms = np.linalg.norm(A, axis=0)
        if norms.min() > 1e-150:
            return A / norms
        # a zero column is a probability-zero event; redraw from the
        # continuing stream (fresh frequencies for the DCT case)
    raise RuntimeError("could not draw a matrix without degenerate columns")


def mutual_coherence(A) -> float:
    """Largest |<a_i, a_j>| over distinct normalized columns."""
    A = np.asarray(A, dtype=np.float64)
    g = np.abs(A.T @ A)
    np.fill_diagonal(g, 0.0)
    return float(g.max())


def gen_signal(spec: SignalSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    support = rng.choice(spec.n, size=spec.k, replace=False)
    x = np.zeros(spec.n)
    x[support] = rng.uniform(spec.amp_lo, spec.amp_hi, size=spec.k)
    return x


def relative_error(x_hat, x) -> float:
    """Root relative squared error ||x_hat - x|| / ||x||."""
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    nx = np.linalg.norm(x)
    if nx == 0.0:
        raise ValueError("reference signal is zero")
    return float(np.linalg.norm(x_hat - x) / nx)


def is_success(x_hat, x) -> bool:
    """Strictly below 0.01 counts as a successful reconstruction."""
    return relative_error(x_hat, x) < 0.01


def trial_seeds(base: int, sweep_key: int, trial: int) -> tuple[int, int]:
    """Split (base, sweep_key, trial) into independent matrix/signal seeds.

    SeedSequence hashing keeps streams reproducible and collision-free
    across sweep points without coordinating counters.
    """
    state = np.random.SeedSequence([int(base), int(sweep_key), int(trial)])
    a, b = state.generate_state(2, dtype=np.uint64)
    return int(a), int(b)


def _write_rows(rows) -> str:
    buf = io.StringIO()
    for row in rows:
        buf.write(",".join(repr(float(v)) for v in row))
        buf.write("\n")
    return buf.getvalue()


def matrix_to_csv(A) -> str:
    """Row-major CSV with shortest round-trip decimals."""
    return _write_rows(np.asarray(A, dtype=np.float64))


def vector_to_csv(x) -> str:
    return _write_rows([[v] for v in np.asarray(x, dtype=np.float64)])
