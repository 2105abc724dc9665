"""Concentration diagnostics for Gegenbauer Gram matrices.

For N points theta_i on S^{d-1}(sqrt(d)), the matrix
W_ij = Q_k(<theta_i, theta_j>) has unit diagonal and, when N is small
against d^k, concentrates on the identity in operator norm.  The deviation
||W - I||_op is the diagnostic tracked here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sphere
from ._accel import gegenbauer_table

__all__ = ["PowerIterationError", "gram_gegenbauer", "opnorm", "GramDiagnostic",
           "gram_deviation"]

_MAX_POWER_ITERS = 10_000


class PowerIterationError(RuntimeError):
    def __init__(self, message: str, last_estimate: float):
        super().__init__(message)
        self.last_estimate = last_estimate


def gram_gegenbauer(theta: np.ndarray, k: int) -> np.ndarray:
    """W_ij = Q_k^{(d)}(<theta_i, theta_j>), exact ones on the diagonal."""
    theta = np.asarray(theta, float)
    d = theta.shape[1]
    W = gegenbauer_table(d, k, theta @ theta.T)[k]
    np.fill_diagonal(W, 1.0)   # Q_k(d) = 1; overwrite dot-product roundoff
    return W


def _power_iterate(M2, v, tol):
    est = 0.0
    for _ in range(_MAX_POWER_ITERS):
        w = M2(v)
        new = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, True
        v = w / norm
        if abs(new - est) <= tol * max(abs(new), 1e-300):
            return new, True
        est = new
    return est, False


def opnorm(M: np.ndarray, tol: float = 1e-6, seed: int = 0) -> float:
    """Spectral norm of a symmetric matrix by power iteration on M^2.

    Squaring makes the dominant eigenvalue of the iteration |lambda|_max^2,
    so negative extremal eigenvalues are handled.  Deterministic all-ones
    start plus one random restart; non-convergence raises with the last
    iterate attached.
    """
    M = np.asarray(M, float)
    n = M.shape[0]
    if M.shape != (n, n) or not np.allclose(M, M.T, atol=1e-10 * max(1.0, np.abs(M).max())):
        raise ValueError("opnorm expects a symmetric matrix")
    M2 = lambda v: M @ (M @ v)
    best = 0.0
    converged = False
    starts = [np.ones(n) / np.sqrt(n),
              sphere.rng_for(seed).standard_normal(n)]
    for v0 in starts:
        v0 = v0 / np.linalg.norm(v0)
        est, ok = _power_iterate(M2, v0, tol)
        best = max(best, est)
        converged = converged or ok
    if not converged:
        raise PowerIterationError(
            f"power iteration did not converge in {_MAX_POWER_ITERS} iterations",
            last_estimate=float(np.sqrt(max(best, 0.0))),
        )
    return float(np.sqrt(max(best, 0.0)))


@dataclass(frozen=True)
class GramDiagnostic:
    d: int
    k: int
    N: int
    deviations: list[float]    # ||W - I||_op, one per repetition

    @property
    def median(self) -> float:
        return float(np.median(self.deviations))


def gram_deviation(d: int, k: int, N: int, seeds) -> GramDiagnostic:
    """||W - I||_op over the given seeds."""
    devs = []
    for s in seeds:
        theta = sphere.sample_sphere(N, d, s).points
        W = gram_gegenbauer(theta, k)
        devs.append(opnorm(W - np.eye(N)))
    return GramDiagnostic(d=d, k=k, N=N, deviations=devs)
