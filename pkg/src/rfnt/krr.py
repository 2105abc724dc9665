"""Kernel ridge regression with rotationally invariant kernels.

Given samples X on S^{d-1}(sqrt(d)) and a kernel h of the correlation
t = <x_i, x_j>/d, the fitted coefficients are a = (H + lam I)^{-1} y with
H_ij = h(<x_i, x_j>/d); predictions at x are y' (H + lam I)^{-1} h(x) with
h(x)_i = h(<x, x_i>/d).  The empirical risk has the closed form
lam^2 ||(H + lam I)^{-1} y||^2 / n, which must agree with the direct
training residual; disagreement signals a broken solve and is a hard error.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from . import sphere
from .linmodels import TargetFunction

__all__ = [
    "KernelMatrix",
    "KRRModel",
    "assemble_kernel",
    "krr_fit",
    "krr_predict",
    "krr_test_risk",
    "krr_empirical_risk",
    "make_labels",
]

logger = logging.getLogger(__name__)

MAX_KERNEL_N = 20_000
_BLOCK = 2048
_EMPIRICAL_AGREE_RTOL = 1e-8


@dataclass(frozen=True)
class KernelMatrix:
    H: np.ndarray
    kernel: Callable[[np.ndarray], np.ndarray]
    X: sphere.SphereSample

    @property
    def n(self) -> int:
        return self.H.shape[0]


def assemble_kernel(h: Callable[[np.ndarray], np.ndarray],
                    X: sphere.SphereSample,
                    max_n: int = MAX_KERNEL_N) -> KernelMatrix:
    """H_ij = h(<x_i, x_j>/d), assembled by symmetric row blocks.

    The diagonal is h evaluated at exactly t = 1, so the matrix is consistent
    with predictions made through the same callable (exact interpolation at
    lam = 0); sample-norm roundoff in <x_i, x_i>/d never reaches the kernel.
    """
    pts = X.points
    n, d = pts.shape
    if n > max_n:
        raise MemoryError(f"kernel matrix n={n} over the cap {max_n}")
    H = np.empty((n, n))
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        corr = (pts[start:stop] @ pts[start:].T) / d
        vals = np.asarray(h(corr), float)
        H[start:stop, start:] = vals
        H[start:, start:stop] = vals.T
    np.fill_diagonal(H, float(h(np.asarray(1.0))))
    return KernelMatrix(H=H, kernel=h, X=X)


@dataclass(frozen=True)
class KRRModel:
    kernel_matrix: KernelMatrix
    y: np.ndarray
    lam: float          # the penalty actually used in the solve
    coef: np.ndarray
    noise_tau2: float = 0.0
    offset: float = 0.0  # label mean removed before the solve, re-added at predict

    @property
    def n(self) -> int:
        return self.kernel_matrix.n


# a kernel whose constant eigenvalue is below this fraction of its diagonal
# cannot express an intercept; callers should then center the labels
ZERO_MEAN_FRACTION = 1e-9


def kernel_has_zero_mean(spec) -> bool:
    """True when xi_0 is numerically zero relative to the kernel diagonal."""
    return abs(spec.xi[0]) < ZERO_MEAN_FRACTION * spec.total_mass


def krr_fit(K: KernelMatrix, y: np.ndarray, lam: float,
            noise_tau2: float = 0.0, center: bool = False) -> KRRModel:
    """Solve (H + lam I) a = y by a symmetric positive-definite factorization.

    lam = 0 is attempted directly; if H is numerically singular the solve
    reruns with jitter 1e-12 h(1) and the substitution is logged.  With
    ``center=True`` the label mean is removed before the solve and restored
    at prediction, for kernels that cannot express an intercept (see
    ``kernel_has_zero_mean``).
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    y = np.asarray(y, float)
    offset = float(y.mean()) if center else 0.0
    y = y - offset
    n = K.n
    used = lam
    A = K.H + lam * np.eye(n)
    try:
        c, low = scipy.linalg.cho_factor(A)
        coef = scipy.linalg.cho_solve((c, low), y)
    except np.linalg.LinAlgError:
        if lam > 0:
            cond = np.linalg.cond(A)
            raise np.linalg.LinAlgError(
                f"kernel system not positive definite at lam={lam} (cond~{cond:.2e})"
            )
        used = 1e-12 * float(K.H[0, 0])
        logger.info("singular kernel matrix at lam=0; refitting with jitter %g", used)
        c, low = scipy.linalg.cho_factor(K.H + used * np.eye(n))
        coef = scipy.linalg.cho_solve((c, low), y)
    resid = np.linalg.norm((K.H + used * np.eye(n)) @ coef - y)
    if resid > 1e-8 * max(np.linalg.norm(y), 1e-300):
        raise np.linalg.LinAlgError(
            f"kernel solve residual {resid:g} exceeds tolerance"
        )
    return KRRModel(kernel_matrix=K, y=y, lam=used, coef=coef,
                    noise_tau2=noise_tau2, offset=offset)


def krr_predict(model: KRRModel, x: np.ndarray) -> np.ndarray:
    """Prediction y' (H + lam I)^{-1} h(x); x is one point or a batch of rows."""
    pts = model.kernel_matrix.X.points
    d = pts.shape[1]
    x = np.atleast_2d(np.asarray(x, float))
    hx = np.asarray(model.kernel_matrix.kernel((x @ pts.T) / d), float)
    out = hx @ model.coef + model.offset
    return out if out.size > 1 else float(out[0])


def krr_test_risk(model: KRRModel, target: TargetFunction,
                  n_test: int, seed: int) -> float:
    """Monte Carlo E_x[(f(x) - fhat(x))^2] over fresh sphere samples."""
    d = model.kernel_matrix.X.points.shape[1]
    X = sphere.sample_sphere(n_test, d, seed)
    pred = krr_predict(model, X.points)
    return float(np.mean((target(X.points) - pred) ** 2))


def krr_empirical_risk(model: KRRModel) -> float:
    """Training risk, via the identity lam^2 ||a||^2 / n.

    Also evaluated as the direct residual (1/n) sum (y_i - fhat(x_i))^2; the
    two must agree to relative 1e-8 or the solver is broken.
    """
    n = model.n
    closed = model.lam ** 2 * float(model.coef @ model.coef) / n
    fitted = model.kernel_matrix.H @ model.coef
    direct = float(np.mean((model.y - fitted) ** 2))
    # relative agreement, with an absolute floor so the lam ~ 0 case (both
    # sides numerically zero) does not trip on roundoff
    floor = 1e-10 * float(np.mean(model.y ** 2)) + 1e-300
    if abs(closed - direct) > _EMPIRICAL_AGREE_RTOL * max(closed, direct, floor):
        raise ArithmeticError(
            f"empirical risk mismatch: closed={closed:g} direct={direct:g}"
        )
    return closed


def make_labels(target: TargetFunction, X: sphere.SphereSample,
                tau: float, seed: int) -> np.ndarray:
    """y_i = f(x_i) + eps_i with eps_i ~ N(0, tau^2)."""
    y = target(X.points)
    if tau > 0:
        y = y + tau * sphere.rng_for(seed, 1).standard_normal(X.n)
    return y
