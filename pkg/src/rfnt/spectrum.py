"""Activation and kernel spectra in the Gegenbauer/Hermite bases.

An activation sigma acting on <w, x> (w on the unit sphere, x on
S^{d-1}(sqrt(d))) expands as

    sigma(u) = sum_k lam_{d,k} B(d,k) Q_k(sqrt(d) u),
    lam_{d,k} = int sigma(u) Q_k(sqrt(d) u) dtau(u),

and Parseval gives sum_k lam_{d,k}^2 B(d,k) = ||sigma||^2.  The induced
rotationally invariant kernels, as functions of t = <x1, x2>/d:

    rf:  h(t) = E_w[sigma(<w,x1>) sigma(<w,x2>)] = sum_k lam_k^2 B(d,k) Q_k(d t)
    nt:  h(t) = t * E_w[sigma'(<w,x1>) sigma'(<w,x2>)]
             = t * sum_k lam_k(sigma')^2 B(d,k) Q_k(d t)
             = (1/d) * sum_m Gamma_m Q_m(d t),
    Gamma_m = d [t_{m-1} lam_{m-1}(sigma')^2 B(d,m-1)
                 + s_{m+1} lam_{m+1}(sigma')^2 B(d,m+1)],

with (s_k, t_k) the recurrence coefficients and t_{-1} = 0.

A kernel's eigenvalue on the degree-k harmonic subspace is

    xi_{d,k} = int h(x/sqrt(d)) Q_k(sqrt(d) x) dtau(x),

so for the rf kernel xi_{d,k} = lam_{d,k}^2 exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import sqrt
from typing import Callable

import numpy as np

from . import _accel, sphere
from .specialfn import dim_harmonics, recurrence_coeffs

__all__ = [
    "ActivationSpec",
    "shifted_relu",
    "relu",
    "identity_activation",
    "step_activation",
    "KernelSpectrum",
    "activation_gegenbauer_coeff",
    "activation_gegenbauer_coeffs",
    "hermite_coeff",
    "hermite_coeffs_upto",
    "kernel_eigenvalues",
    "rf_kernel",
    "nt_kernel",
    "lambda_star",
]

DEFAULT_MAX_DEGREE = 40

# xi below this fraction of the total mass counts as exactly zero when taking
# the min in lambda_star
ZERO_FLOOR_FRACTION = 1e-9


@dataclass(frozen=True)
class ActivationSpec:
    """Activation with weak derivative and declared kink locations."""

    name: str
    sigma: Callable[[np.ndarray], np.ndarray]
    sigma_prime: Callable[[np.ndarray], np.ndarray]
    kinks: tuple[float, ...] = ()
    u0: float | None = None


def shifted_relu(u0: float = 0.5) -> ActivationSpec:
    """sigma(u) = max(u - u0, 0), weak derivative 1_{u >= u0}."""
    return ActivationSpec(
        name=f"shifted_relu(u0={u0})",
        sigma=lambda u: np.maximum(u - u0, 0.0),
        sigma_prime=lambda u: (u >= u0).astype(np.float64),
        kinks=(u0,),
        u0=u0,
    )


def relu() -> ActivationSpec:
    return shifted_relu(0.0)


def identity_activation() -> ActivationSpec:
    return ActivationSpec("identity", lambda u: np.asarray(u, float),
                          lambda u: np.ones_like(np.asarray(u, float)))


def step_activation(u0: float = 0.0) -> ActivationSpec:
    """1_{u >= u0}; weak derivative zero a.e."""
    return ActivationSpec(
        name=f"step(u0={u0})",
        sigma=lambda u: (u >= u0).astype(np.float64),
        sigma_prime=lambda u: np.zeros_like(np.asarray(u, float)),
        kinks=(u0,),
        u0=u0,
    )


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def activation_gegenbauer_coeffs(act: ActivationSpec, d: int, kmax: int,
                                 derivative: bool = False) -> np.ndarray:
    """lam_{d,k} for k = 0..kmax, against the sphere marginal."""
    fn = act.sigma_prime if derivative else act.sigma
    x, w = sphere.marginal_nodes(d, act.kinks)
    table = _accel.gegenbauer_table(d, kmax, sqrt(d) * x)
    vals = np.asarray(fn(x), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError(f"activation {act.name} non-finite on quadrature nodes")
    return table @ (w * vals)


def activation_gegenbauer_coeff(act: ActivationSpec, d: int, k: int) -> float:
    """Single coefficient lam_{d,k}(sigma)."""
    return float(activation_gegenbauer_coeffs(act, d, k)[k])


def hermite_coeff(fn: Callable[[np.ndarray], np.ndarray], k: int, kinks=()) -> float:
    """mu_k = E[fn(G) He_k(G)] for standard Gaussian G."""
    return hermite_coeffs_upto(fn, k, kinks)[k]


def hermite_coeffs_upto(fn, kmax: int, kinks=()) -> np.ndarray:
    x, w = sphere.gaussian_nodes(kinks)
    table = _accel.hermite_table(kmax, x)
    vals = np.asarray(fn(x), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand non-finite on quadrature nodes")
    return table @ (w * vals)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpectrum:
    """Per-degree eigenvalues of a rotationally invariant kernel.

    ``total_mass`` is h(1) = sum over all degrees of xi_k B(d,k), known
    exactly from the kernel diagonal; tail masses therefore come from the
    complement, never from truncated sums.
    """

    d: int
    xi: np.ndarray
    total_mass: float
    dims: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.dims is None:
            object.__setattr__(
                self, "dims",
                np.array([dim_harmonics(self.d, k) for k in range(len(self.xi))], float),
            )
        floor = -ZERO_FLOOR_FRACTION * max(self.total_mass, 0.0)
        if np.any(self.xi < floor):
            raise ValueError(
                f"kernel eigenvalue below PSD floor: min xi = {self.xi.min():g}"
            )
        if self.mass_upto(self.max_degree) > self.total_mass * (1.0 + 1e-8):
            raise ValueError("computed spectral mass exceeds the kernel diagonal")

    @property
    def max_degree(self) -> int:
        return len(self.xi) - 1

    def mass_upto(self, ell: int) -> float:
        """sum_{k <= ell} xi_k B(d,k)."""
        return float(np.dot(self.xi[: ell + 1], self.dims[: ell + 1]))

    def kappa_tail(self, ell: int) -> float:
        """Tail mass sum_{k >= ell+1} xi_k B(d,k), in complement form."""
        return self.total_mass - self.mass_upto(ell)

    def lambda_star(self, ell: int) -> float:
        """d^ell * min_{k <= ell} xi_k, with tiny eigenvalues floored to 0."""
        if ell > self.max_degree:
            raise ValueError(f"ell={ell} beyond computed degree {self.max_degree}")
        floor = ZERO_FLOOR_FRACTION * self.total_mass
        head = np.where(np.abs(self.xi[: ell + 1]) < floor, 0.0, self.xi[: ell + 1])
        return float(self.d ** ell * head.min())

    def truncation_tail(self) -> float:
        """Mass beyond the computed degrees (total - sum computed)."""
        return self.total_mass - self.mass_upto(self.max_degree)


def lambda_star(spec: KernelSpectrum, ell: int) -> float:
    return spec.lambda_star(ell)


def smooth_kernel_xi_estimate(h, d: int, k: int, step: float = 1e-2) -> float:
    """Diagnostic h^(k)(0) / d^k for smooth kernels, by central differences.

    For kernels smooth near 0 this approximates xi_{d,k} to leading order in
    1/d; useful as an order-of-magnitude cross-check, not as a computation
    path (the error term's constants are not controlled).
    """
    from math import comb

    if k < 0:
        raise ValueError("k must be >= 0")
    nodes = np.array([(k / 2.0 - i) * step for i in range(k + 1)])
    weights = np.array([(-1) ** i * comb(k, i) for i in range(k + 1)], float)
    deriv = float(np.dot(weights, np.asarray(h(nodes), float))) / step ** k
    return deriv / d ** k


def kernel_eigenvalues(h: Callable[[np.ndarray], np.ndarray], d: int,
                       kmax: int = DEFAULT_MAX_DEGREE, kinks=()) -> KernelSpectrum:
    """Spectrum of the kernel (x1, x2) -> h(<x1,x2>/d) on S^{d-1}(sqrt(d)).

    h is a function of the correlation t in [-1, 1]; kinks are t-locations.
    """
    x, w = sphere.marginal_nodes(d, [sqrt(d) * k for k in kinks])
    table = _accel.gegenbauer_table(d, kmax, sqrt(d) * x)
    vals = np.asarray(h(x / sqrt(d)), dtype=np.float64)
    xi = table @ (w * vals)
    total = float(h(np.asarray(1.0)))
    return KernelSpectrum(d=d, xi=xi, total_mass=total)


class _SeriesKernel:
    """Kernel t -> series in Q_k(d t); callable on arrays of correlations."""

    def __init__(self, d: int, coeffs: np.ndarray, linear_factor: bool):
        self.d = d
        self._coeffs = np.asarray(coeffs, float)
        self._linear = linear_factor

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = _accel.gegenbauer_series(self._coeffs, self.d, self.d * t)
        if self._linear:
            out = t * out
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class RFKernel:
    """h(t) = E_w[sigma(<w,x1>) sigma(<w,x2>)], t = <x1,x2>/d."""

    activation: ActivationSpec
    d: int
    lam: np.ndarray            # lam_{d,k}(sigma)
    norm2: float               # ||sigma||^2 = h(1), exact from quadrature

    @property
    def spectrum(self) -> KernelSpectrum:
        return KernelSpectrum(d=self.d, xi=self.lam ** 2, total_mass=self.norm2)

    @property
    def diag_value(self) -> float:
        """Exact h(1), free of series truncation."""
        return self.norm2

    def __call__(self, t):
        dims = self.spectrum.dims
        return _SeriesKernel(self.d, self.lam ** 2 * dims, False)(t)

    def mc_oracle(self, x1: np.ndarray, x2: np.ndarray, n_draws: int, seed: int):
        """Monte Carlo E_w[sigma(<w,x1>) sigma(<w,x2>)] with standard error."""
        return _mc_pair_mean(self.activation.sigma, self.d, x1, x2, n_draws, seed)


@dataclass(frozen=True)
class NTKernel:
    """h(t) = t * E_w[sigma'(<w,x1>) sigma'(<w,x2>)], t = <x1,x2>/d."""

    activation: ActivationSpec
    d: int
    lam_prime: np.ndarray      # lam_{d,k}(sigma')
    norm2_prime: float         # ||sigma'||^2 = h(1)

    @property
    def diag_value(self) -> float:
        """Exact h(1), free of series truncation."""
        return self.norm2_prime

    def __call__(self, t):
        dims = np.array([dim_harmonics(self.d, k) for k in range(len(self.lam_prime))],
                        float)
        return _SeriesKernel(self.d, self.lam_prime ** 2 * dims, True)(t)

    def gamma(self, m: int) -> float:
        """Gegenbauer coefficient of d*h: d*h(t) = sum_m Gamma_m Q_m(d t)."""
        d, lam = self.d, self.lam_prime
        out = 0.0
        if m >= 1:
            _, t_prev = recurrence_coeffs(d, m - 1)
            out += t_prev * lam[m - 1] ** 2 * dim_harmonics(d, m - 1)
        if m + 1 < len(lam):
            s_next, _ = recurrence_coeffs(d, m + 1)
            out += s_next * lam[m + 1] ** 2 * dim_harmonics(d, m + 1)
        return d * out

    def gamma_coeffs(self) -> np.ndarray:
        """Gamma_m for m = 0..max_degree+1."""
        return np.array([self.gamma(m) for m in range(len(self.lam_prime) + 1)])

    def eval_via_gamma(self, t):
        """Same kernel through the Gamma expansion: h(t) = sum Gamma_m Q_m(dt)/d."""
        return _SeriesKernel(self.d, self.gamma_coeffs() / self.d, False)(t)

    def spectrum(self, kmax: int | None = None) -> KernelSpectrum:
        """Eigenvalues xi_m = Gamma_m / (d B(d,m)); total mass is h(1)."""
        g = self.gamma_coeffs() if kmax is None else np.array(
            [self.gamma(m) for m in range(kmax + 1)])
        dims = np.array([dim_harmonics(self.d, m) for m in range(len(g))], float)
        return KernelSpectrum(d=self.d, xi=g / (self.d * dims),
                              total_mass=self.norm2_prime)

    def mc_oracle(self, x1: np.ndarray, x2: np.ndarray, n_draws: int, seed: int):
        t = float(x1 @ x2) / self.d
        mean, se = _mc_pair_mean(self.activation.sigma_prime, self.d, x1, x2,
                                 n_draws, seed)
        return t * mean, abs(t) * se


def _mc_pair_mean(fn, d: int, x1, x2, n_draws: int, seed: int,
                  chunk: int = 200_000) -> tuple[float, float]:
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n_draws:
        m = min(chunk, n_draws - done)
        w = sphere.unit_sphere_rows(m, d, sphere.derived_seed(seed, done))
        prod = np.asarray(fn(w @ x1), float) * np.asarray(fn(w @ x2), float)
        total += prod.sum()
        total_sq += (prod ** 2).sum()
        done += m
    mean = total / n_draws
    var = max(total_sq / n_draws - mean ** 2, 0.0)
    return float(mean), float(sqrt(var / n_draws))


def _tail_check(name: str, total: float, computed: float):
    tail = total - computed
    if tail > 1e-4 * max(total, 1e-300):
        warnings.warn(
            f"{name}: truncated series misses {tail:g} of total mass {total:g}; "
            "increase kmax",
            stacklevel=3,
        )


def rf_kernel(act: ActivationSpec, d: int, kmax: int = DEFAULT_MAX_DEGREE) -> RFKernel:
    lam = activation_gegenbauer_coeffs(act, d, kmax)
    x, w = sphere.marginal_nodes(d, act.kinks)
    norm2 = float(np.dot(w, np.asarray(act.sigma(x), float) ** 2))
    kern = RFKernel(activation=act, d=d, lam=lam, norm2=norm2)
    _tail_check(f"rf_kernel({act.name}, d={d})", norm2, kern.spectrum.mass_upto(kmax))
    return kern


def nt_kernel(act: ActivationSpec, d: int, kmax: int = DEFAULT_MAX_DEGREE) -> NTKernel:
    lam = activation_gegenbauer_coeffs(act, d, kmax, derivative=True)
    x, w = sphere.marginal_nodes(d, act.kinks)
    norm2 = float(np.dot(w, np.asarray(act.sigma_prime(x), float) ** 2))
    dims = np.array([dim_harmonics(d, k) for k in range(kmax + 1)], float)
    _tail_check(f"nt_kernel({act.name}, d={d})", norm2, float(np.dot(lam ** 2, dims)))
    return NTKernel(activation=act, d=d, lam_prime=lam, norm2_prime=norm2)
