"""Gegenbauer and Hermite polynomials, harmonic subspace dimensions.

Conventions used throughout the package:

* ``Q_k`` is the degree-k Gegenbauer polynomial on ``[-d, d]`` normalized so
  ``Q_k(d) = 1``; it satisfies ``(t/d) Q_k = s_k Q_{k-1} + t_k Q_{k+1}`` with
  ``s_k = k/(2k+d-2)`` and ``t_k = (k+d-2)/(2k+d-2)``.
* ``He_k`` is the probabilists' Hermite polynomial, ``E[He_j(G) He_k(G)] = k! δ_jk``
  for standard Gaussian ``G``.
* ``dim_harmonics(d, k)`` is the number of independent degree-k spherical
  harmonics on the (d-1)-sphere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, sqrt

import numpy as np

from . import _accel

__all__ = [
    "GegenbauerEvaluator",
    "HermiteEvaluator",
    "gegenbauer_eval",
    "hermite_eval",
    "dim_harmonics",
    "recurrence_coeffs",
    "gegenbauer_scaled_coeffs",
    "hermite_coeffs",
    "gegenbauer_hermite_gap",
]

# tolerance for |t| <= d domain checks
_DOMAIN_SLACK = 1e-12


def recurrence_coeffs(d: int, k: int) -> tuple[float, float]:
    """(s_k, t_k) with (t/d) Q_k = s_k Q_{k-1} + t_k Q_{k+1}."""
    return k / (2.0 * k + d - 2.0), (k + d - 2.0) / (2.0 * k + d - 2.0)


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError(f"ambient dimension must be >= 2, got {d}")


def _check_domain(d: int, t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    bound = d * (1.0 + _DOMAIN_SLACK)
    if np.any(np.abs(t) > bound):
        bad = float(np.max(np.abs(t)))
        raise ValueError(f"argument outside [-d, d]: |t| = {bad} > {d}")
    return t


@dataclass(frozen=True)
class GegenbauerEvaluator:
    """Recurrence-based evaluator of Q_0..Q_max_degree on [-d, d].

    Immutable; safe to share across threads.
    """

    d: int
    max_degree: int

    def __post_init__(self):
        _check_d(self.d)
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")

    def table(self, t) -> np.ndarray:
        """All degrees at once: shape (max_degree+1, *t.shape)."""
        t = _check_domain(self.d, t)
        return _accel.gegenbauer_table(self.d, self.max_degree, t)

    def eval(self, k: int, t):
        if not 0 <= k <= self.max_degree:
            raise ValueError(f"degree {k} outside [0, {self.max_degree}]")
        t = _check_domain(self.d, t)
        out = _accel.gegenbauer_table(self.d, k, t)[k]
        return out if out.ndim else float(out)

    def series(self, coef, t):
        """sum_k coef[k] Q_k(t) without materializing the table."""
        t = _check_domain(self.d, t)
        return _accel.gegenbauer_series(coef, self.d, t)


def gegenbauer_eval(d: int, k: int, t):
    """Q_k^{(d)}(t) by upward recurrence; t may be scalar or array."""
    return GegenbauerEvaluator(d, max(k, 0)).eval(k, t)


@dataclass(frozen=True)
class HermiteEvaluator:
    """Probabilists' Hermite polynomials He_0..He_max_degree."""

    max_degree: int

    def table(self, x) -> np.ndarray:
        return _accel.hermite_table(self.max_degree, np.asarray(x, dtype=np.float64))

    def eval(self, k: int, x):
        if not 0 <= k <= self.max_degree:
            raise ValueError(f"degree {k} outside [0, {self.max_degree}]")
        out = self.table(x)[k]
        return out if out.ndim else float(out)


def hermite_eval(k: int, x):
    """He_k(x); He_0 = 1, He_1 = x, He_{k+1} = x He_k - k He_{k-1}."""
    if k < 0:
        raise ValueError("degree must be >= 0")
    return HermiteEvaluator(k).eval(k, x)


def dim_harmonics(d: int, k: int) -> int:
    """Dimension of the space of degree-k spherical harmonics in d variables.

    Exact integer via ``B(d,k) = C(d+k-1, k) - C(d+k-3, k-2)``; Python ints are
    arbitrary precision, so there is no overflow for any (d, k).  ``B(d,0) = 1``
    by definition (the (2k+d-2)/k form is singular at k = 0).
    """
    _check_d(d)
    if k < 0:
        raise ValueError("degree must be >= 0")
    if k == 0:
        return 1
    if k == 1:
        return d
    return comb(d + k - 1, k) - comb(d + k - 3, k - 2)


# remit for exact coefficient expansion; larger products overflow the
# Fraction -> float conversion budget and are rejected explicitly
_COEFF_MAX_K = 12
_COEFF_MAX_D = 2000


def _gegenbauer_fraction_coeffs(d: int, k: int) -> list[Fraction]:
    """Coefficients of Q_k^{(d)}(t) in t, exact rationals, ascending degree."""
    q_prev = [Fraction(1)]
    if k == 0:
        return q_prev
    q_cur = [Fraction(0), Fraction(1, d)]
    for j in range(1, k):
        s_j = Fraction(j, 2 * j + d - 2)
        t_j = Fraction(j + d - 2, 2 * j + d - 2)
        shifted = [Fraction(0)] + [c / d for c in q_cur]
        nxt = [(shifted[i] - (s_j * q_prev[i] if i < len(q_prev) else 0)) / t_j
               for i in range(len(shifted))]
        q_prev, q_cur = q_cur, nxt
    return q_cur


def gegenbauer_scaled_coeffs(d: int, k: int) -> np.ndarray:
    """Monomial coefficients (ascending) of Q_k^{(d)}(sqrt(d) x) * B(d,k)^{1/2}."""
    _check_d(d)
    if not (0 <= k <= _COEFF_MAX_K and d <= _COEFF_MAX_D):
        raise OverflowError(
            f"coefficient expansion limited to k <= {_COEFF_MAX_K}, d <= {_COEFF_MAX_D}"
        )
    rational = _gegenbauer_fraction_coeffs(d, k)
    root_b = sqrt(dim_harmonics(d, k))
    return np.array(
        [float(c) * d ** (j / 2.0) * root_b for j, c in enumerate(rational)]
    )


def hermite_coeffs(k: int) -> np.ndarray:
    """Monomial coefficients (ascending) of He_k(x)."""
    c = np.zeros(k + 1)
    c[k] = 1.0
    return np.polynomial.hermite_e.herme2poly(c)


def gegenbauer_hermite_gap(d: int, k: int) -> float:
    """Max-norm distance between Coeff{Q_k(sqrt(d) x) B(d,k)^{1/2}} and
    Coeff{He_k(x)/sqrt(k!)}; tends to 0 as d grows, for fixed k."""
    lhs = gegenbauer_scaled_coeffs(d, k)
    rhs = hermite_coeffs(k) / sqrt(factorial(k))
    return float(np.max(np.abs(lhs - rhs)))
