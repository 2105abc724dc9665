"""Low-degree polynomial projections and plateau levels ||P_{> ell} f||^2.

P_{<= ell} f is realized as least squares of f-samples onto all monomials of
total degree <= ell; the residual mean square estimates ||P_{> ell} f||^2.
The degree-k projector also has the integral form

    (P_k f)(x) = B(d,k) E_y[ Q_k(<x, y>) f(y) ],

estimated here by Monte Carlo.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb, sqrt

import numpy as np

from . import sphere
from .linmodels import TargetFunction, fit_minnorm
from .specialfn import dim_harmonics
from ._accel import gegenbauer_table

__all__ = ["LowDegreeFit", "project_low_degree", "projector_gegenbauer",
           "monomial_design"]

MAX_BASIS_COLUMNS = 20_000
OVERSAMPLE = 5


@dataclass(frozen=True)
class LowDegreeFit:
    ell: int
    coef: np.ndarray
    exponents: list[tuple[int, ...]]
    residual_norm2: float       # estimate of ||P_{> ell} f||^2
    residual_stderr: float
    fitted_norm2: float         # estimate of ||P_{<= ell} f||^2
    n_fit: int


def _monomial_exponents(d: int, ell: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(ell + 1):
        out.extend(combinations_with_replacement(range(d), deg))
    return out


def monomial_design(X: np.ndarray, exponents: list[tuple[int, ...]]) -> np.ndarray:
    Z = np.ones((X.shape[0], len(exponents)))
    for j, combo in enumerate(exponents):
        for i in combo:
            Z[:, j] *= X[:, i]
    return Z


def project_low_degree(target: TargetFunction, ell: int, d: int,
                       n_fit: int, seed: int) -> LowDegreeFit:
    """Least-squares fit of f on monomials of total degree <= ell.

    Requires n_fit >= 5x the basis size C(d+ell, ell); basis sizes above
    MAX_BASIS_COLUMNS are rejected (use the target's registered closed forms
    at that scale).
    """
    basis_size = comb(d + ell, ell)
    if basis_size > MAX_BASIS_COLUMNS:
        raise ValueError(
            f"monomial basis has {basis_size} columns, over {MAX_BASIS_COLUMNS}"
        )
    if n_fit < OVERSAMPLE * basis_size:
        raise ValueError(
            f"under-sampled basis: n_fit={n_fit} < {OVERSAMPLE} x {basis_size}"
        )
    X = sphere.sample_sphere(n_fit, d, seed).points
    f = target(X)
    exps = _monomial_exponents(d, ell)
    Z = monomial_design(X, exps)
    coef, _ = fit_minnorm(Z, f)
    res = f - Z @ coef
    sq = res ** 2
    residual = float(sq.mean())
    stderr = float(sq.std(ddof=1) / sqrt(n_fit))
    fitted = float(np.mean((Z @ coef) ** 2))
    return LowDegreeFit(ell=ell, coef=coef, exponents=exps,
                        residual_norm2=residual, residual_stderr=stderr,
                        fitted_norm2=fitted, n_fit=n_fit)


def projector_gegenbauer(f, k: int, x: np.ndarray, n_mc: int,
                         seed: int) -> tuple[float, float]:
    """(P_k f)(x) by Monte Carlo, with standard error.

    f maps batches of sphere points to values; x is a single point on
    S^{d-1}(sqrt(d)).
    """
    x = np.asarray(x, float)
    d = x.size
    B = dim_harmonics(d, k)
    est = 0.0
    sq = 0.0
    done = 0
    chunk = 200_000
    while done < n_mc:
        m = min(chunk, n_mc - done)
        Y = sphere.sample_sphere(m, d, sphere.derived_seed(seed, done)).points
        vals = B * gegenbauer_table(d, k, Y @ x)[k] * np.asarray(f(Y), float)
        est += vals.sum()
        sq += (vals ** 2).sum()
        done += m
    mean = est / n_mc
    var = sq / n_mc - mean ** 2
    return float(mean), float(sqrt(max(var, 0.0) / n_mc))
