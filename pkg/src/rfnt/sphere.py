"""Uniform sampling on the sphere of radius sqrt(d) and quadrature against
its one-dimensional marginal.

The marginal law of a single coordinate of ``x ~ Unif(S^{d-1}(sqrt(d)))`` has
density ``C_d (1 - x^2/d)^{(d-3)/2}`` on ``[-sqrt(d), sqrt(d)]`` with
``C_d = Gamma(d-1) / (2^{d-2} sqrt(d) Gamma((d-1)/2)^2) -> (2 pi)^{-1/2}``.

Quadrature substitutes ``t = x / sqrt(d)`` and integrates with composite
Gauss-Legendre panels: uniform panels split at every declared integrand kink,
plus geometrically graded panels into the endpoints +-1 where the weight has
fractional-power behavior.  Kinks always land on panel boundaries, so
piecewise-smooth activations integrate at full order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import lgamma, sqrt, pi, log

import numpy as np

__all__ = [
    "derived_seed",
    "rng_for",
    "SphereSample",
    "sample_sphere",
    "MarginalMeasure",
    "marginal_density",
    "quadrature",
    "marginal_nodes",
    "gaussian_nodes",
    "gaussian_quadrature",
]


# ---------------------------------------------------------------------------
# reproducible RNG streams
# ---------------------------------------------------------------------------

def derived_seed(master_seed: int, *key: int) -> int:
    """Deterministic child seed: SeedSequence(master, spawn_key=key).

    Task i of a sweep uses derived_seed(master, i); the derivation is a
    documented hash, so parallel and serial schedules agree.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the (seed, key) stream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereSample:
    """n points on S^{d-1}(sqrt(d)), one per row."""

    points: np.ndarray

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def radius(self) -> float:
        return sqrt(self.d)


def sample_sphere(n: int, d: int, seed: int) -> SphereSample:
    """n i.i.d. uniform points on S^{d-1}(sqrt(d)); deterministic per seed."""
    if n < 1 or d < 2:
        raise ValueError(f"need n >= 1, d >= 2; got n={n}, d={d}")
    g = rng_for(seed).standard_normal((n, d))
    g *= sqrt(d) / np.linalg.norm(g, axis=1)[:, None]
    return SphereSample(points=g)


def unit_sphere_rows(n: int, d: int, seed: int) -> np.ndarray:
    """n i.i.d. uniform rows on the unit sphere S^{d-1}(1)."""
    return sample_sphere(n, d, seed).points / sqrt(d)


# ---------------------------------------------------------------------------
# marginal measure
# ---------------------------------------------------------------------------

def _log_norm_const(d: int) -> float:
    # C_d = Gamma(d-1) / (2^{d-2} sqrt(d) Gamma((d-1)/2)^2), in log space so
    # it survives past d ~ 170 where Gamma overflows
    return lgamma(d - 1) - (d - 2) * log(2.0) - 0.5 * log(d) - 2.0 * lgamma((d - 1) / 2)


@dataclass(frozen=True)
class MarginalMeasure:
    """Law of <x, e> for x uniform on S^{d-1}(sqrt(d))."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be >= 2")
        if self.d < 4:
            warnings.warn(
                f"marginal density exponent (d-3)/2 is nonpositive for d={self.d}; "
                "endpoint behavior is singular",
                stacklevel=2,
            )

    @property
    def norm_const(self) -> float:
        return float(np.exp(_log_norm_const(self.d)))

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        d = self.d
        inside = np.abs(x) < sqrt(d)
        out = np.zeros_like(x, dtype=np.float64)
        xs = x[inside]
        out[inside] = np.exp(_log_norm_const(d) + (d - 3) / 2.0 * np.log1p(-xs * xs / d))
        return out


def marginal_density(d: int, x):
    """Density of the one-dimensional sphere marginal at x (0 off support)."""
    out = MarginalMeasure(d).density(x)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

_N_UNIFORM = 64          # minimum uniform panel count across [-1, 1]
_NODES_PER_PANEL = 16
_GRADE_LEVELS = 40       # geometric halvings into each endpoint


def _panel_edges(lo: float, hi: float, inner: list[float],
                 n_uniform: int, grade: int) -> np.ndarray:
    pts = sorted({lo, hi, *(float(k) for k in inner if lo < k < hi)})
    segs = []
    width = (hi - lo) / n_uniform
    for a, b in zip(pts[:-1], pts[1:]):
        m = max(1, int(round((b - a) / width)))
        segs.append(np.linspace(a, b, m + 1))
    edges = np.unique(np.concatenate(segs))
    if grade > 0:
        left = lo + (edges[1] - edges[0]) * np.power(0.5, np.arange(grade, 0, -1))
        right = hi - (edges[-1] - edges[-2]) * np.power(0.5, np.arange(grade, 0, -1))
        edges = np.unique(np.concatenate([edges, left, right]))
    return edges


def _gauss_legendre_panels(edges: np.ndarray, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    a, b = edges[:-1], edges[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), \
           (half[:, None] * w[None, :]).ravel()


def marginal_nodes(d: int, kinks=(), n_uniform: int = _N_UNIFORM,
                   nodes: int = _NODES_PER_PANEL) -> tuple[np.ndarray, np.ndarray]:
    """Nodes x_i and weights w_i with  int g dtau ~= sum_i w_i g(x_i).

    Kinks are in x-coordinates (the integrand's variable).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    root_d = sqrt(d)
    inner = [k / root_d for k in kinks]
    edges = _panel_edges(-1.0, 1.0, inner, n_uniform, _GRADE_LEVELS)
    t, w = _gauss_legendre_panels(edges, nodes)
    log_weight = _log_norm_const(d) + 0.5 * log(d) + (d - 3) / 2.0 * np.log1p(-t * t)
    return root_d * t, w * np.exp(log_weight)


def quadrature(d: int, g, kinks=()) -> float:
    """Integral of g against the marginal measure of S^{d-1}(sqrt(d)).

    g must be finite at every node (declared kinks sit on panel boundaries
    and are never evaluated); a non-finite value aborts with the location.
    """
    x, w = marginal_nodes(d, kinks)
    vals = np.asarray(g(x), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        i = int(np.argmin(np.isfinite(vals)))
        raise FloatingPointError(
            f"integrand returned {vals[i]} at x={x[i]} (d={d})"
        )
    return float(np.dot(w, vals))


# Gaussian-weight analogue, used for Hermite coefficients.  Same panel policy;
# the domain is truncated where exp(-x^2/2) underflows any polynomial factor.

_GAUSS_HALFWIDTH = 13.0


def gaussian_nodes(kinks=(), halfwidth: float = _GAUSS_HALFWIDTH,
                   n_uniform: int = _N_UNIFORM,
                   nodes: int = _NODES_PER_PANEL) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for integrals against the standard Gaussian."""
    edges = _panel_edges(-halfwidth, halfwidth, list(kinks), n_uniform, 0)
    x, w = _gauss_legendre_panels(edges, nodes)
    return x, w * np.exp(-0.5 * x * x) / sqrt(2.0 * pi)


def gaussian_quadrature(g, kinks=()) -> float:
    """E[g(G)] for standard Gaussian G, with kink-aware panels."""
    x, w = gaussian_nodes(kinks)
    vals = np.asarray(g(x), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        i = int(np.argmin(np.isfinite(vals)))
        raise FloatingPointError(f"integrand returned {vals[i]} at x={x[i]}")
    return float(np.dot(w, vals))
