"""Random-features and neural-tangent linear models on the sphere.

Both models are linear in their coefficients over random first-layer
features drawn on the unit sphere:

    rf:  f(x) = sum_i a_i sigma(<w_i, x>)                (p = N)
    nt:  f(x) = sum_i <a_i, x> sigma'(<w_i, x>)          (p = N d)

Fitting is least squares; overparametrized fits take the minimum-norm
solution.  Risks are normalized by R0 = E[f_star^2], the risk of the
trivial predictor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt
from typing import Callable

import numpy as np
import scipy.linalg

from . import sphere
from .spectrum import ActivationSpec, activation_gegenbauer_coeffs
from .specialfn import dim_harmonics
from ._accel import gegenbauer_series

__all__ = [
    "MemoryBudgetError",
    "FeatureModel",
    "TargetFunction",
    "FitResult",
    "sample_weights",
    "sparse_nn_weights",
    "build_design",
    "fit_minnorm",
    "fit_ridge",
    "estimate_risk",
    "rf_population_risk",
    "quad_split",
    "cubic_hermite",
    "single_neuron",
    "quad_plus_linear",
]

MAX_DESIGN_ENTRIES = 2_000_000_000
SVD_RCOND = 1e-10
# the Gram route squares the spectrum; eigenvalue ratios below float noise are
# treated as zero regardless of the nominal cutoff
_GRAM_EIG_FLOOR = 5e-15
_DIRECT_LSTSQ_MAX_ENTRIES = 4_000_000


class MemoryBudgetError(MemoryError):
    pass


# ---------------------------------------------------------------------------
# weights and designs
# ---------------------------------------------------------------------------

def sample_weights(N: int, d: int, seed: int) -> np.ndarray:
    """N i.i.d. uniform rows on the unit sphere S^{d-1}(1)."""
    return sphere.unit_sphere_rows(N, d, seed)


def sparse_nn_weights(N: int, d: int, seed: int) -> np.ndarray:
    """Axis-aligned random weights w_i = s_i e_{r(i)}, r uniform, s standard normal.

    Used with rf-style second-layer fitting as an upper bound on the risk of a
    trained two-layer network; the rows are intentionally not unit norm.
    """
    rng = sphere.rng_for(seed)
    idx = rng.integers(0, d, size=N)
    s = rng.standard_normal(N)
    W = np.zeros((N, d))
    W[np.arange(N), idx] = s
    return W


@dataclass
class FeatureModel:
    """First-layer weights plus activation; coef appears after fitting."""

    kind: str                      # "rf" | "nt"
    W: np.ndarray                  # N x d
    activation: ActivationSpec
    coef: np.ndarray | None = None
    check_norms: bool = True

    def __post_init__(self):
        if self.kind not in ("rf", "nt"):
            raise ValueError(f"kind must be rf|nt, got {self.kind!r}")
        if self.check_norms:
            norms = np.linalg.norm(self.W, axis=1)
            if np.max(np.abs(norms - 1.0)) > 1e-12:
                raise ValueError("weight rows must lie on the unit sphere")

    @property
    def N(self) -> int:
        return self.W.shape[0]

    @property
    def d(self) -> int:
        return self.W.shape[1]

    @property
    def p(self) -> int:
        return self.N if self.kind == "rf" else self.N * self.d

    def predict(self, X: np.ndarray) -> np.ndarray:
        if self.coef is None:
            raise ValueError("model is not fitted")
        return build_design(self, sphere.SphereSample(X)) @ self.coef


def build_design(model: FeatureModel, X: sphere.SphereSample,
                 max_entries: int | None = None) -> np.ndarray:
    """Design matrix Z (n x p).

    rf: Z_{ij} = sigma(<w_j, x_i>).  nt: Z_{i,(j1 j2)} = (x_i)_{j2}
    sigma'(<w_{j1}, x_i>), columns grouped neuron-major (d contiguous columns
    per neuron).
    """
    cap = MAX_DESIGN_ENTRIES if max_entries is None else max_entries
    pts = X.points
    n = pts.shape[0]
    if n * model.p > cap:
        raise MemoryBudgetError(
            f"design would hold {n * model.p} entries, over the cap {cap}"
        )
    pre = pts @ model.W.T
    if model.kind == "rf":
        return np.asarray(model.activation.sigma(pre), dtype=np.float64)
    gate = np.asarray(model.activation.sigma_prime(pre), dtype=np.float64)
    return (gate[:, :, None] * pts[:, None, :]).reshape(n, model.N * model.d)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveInfo:
    rank: int
    cutoff: float


def fit_minnorm(Z: np.ndarray, y: np.ndarray,
                rcond: float = SVD_RCOND) -> tuple[np.ndarray, SolveInfo]:
    """Minimum-l2-norm least-squares solution of min ||y - Z a||.

    Small systems go through SVD (relative singular-value cutoff ``rcond``);
    large ones through the Gram matrix of the smaller side, which is the same
    solution whenever the spectrum is resolvable at float precision.
    """
    Z = np.asarray(Z, float)
    y = np.asarray(y, float)
    if not (np.all(np.isfinite(Z)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite entries in the least-squares system")
    n, p = Z.shape
    if n * p <= _DIRECT_LSTSQ_MAX_ENTRIES or min(n, p) <= 500:
        coef, _, rank, sv = np.linalg.lstsq(Z, y, rcond=rcond)
        cutoff = rcond * (sv[0] if sv.size else 0.0)
        return coef, SolveInfo(rank=int(rank), cutoff=float(cutoff))
    G = Z.T @ Z if p <= n else Z @ Z.T
    m = G.shape[0]
    try:
        # full-rank fast path: the unique least-squares solution is the
        # minimum-norm one, and Cholesky is several times cheaper than eigh
        c = scipy.linalg.cho_factor(G)
        if p <= n:
            coef = scipy.linalg.cho_solve(c, Z.T @ y)
        else:
            coef = Z.T @ scipy.linalg.cho_solve(c, y)
        return coef, SolveInfo(rank=m, cutoff=0.0)
    except np.linalg.LinAlgError:
        pass
    w, V = np.linalg.eigh(G)
    rhs = V.T @ (Z.T @ y if p <= n else y)
    cut = max(rcond * rcond, _GRAM_EIG_FLOOR) * max(w[-1], 0.0)
    keep = w > cut
    winv = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    if p <= n:
        coef = V @ (winv * rhs)
    else:
        coef = Z.T @ (V @ (winv * rhs))
    info = SolveInfo(rank=int(keep.sum()), cutoff=float(sqrt(max(cut, 0.0))))
    return coef, info


def fit_ridge(Z: np.ndarray, y: np.ndarray, lam: float,
              scaling: str = "plain", d: int | None = None) -> np.ndarray:
    """Ridge solution for the selected penalty convention.

    ``plain``:      min ||y - Z a||^2 + lam ||a||^2
    ``normalized``: min (1/n) ||y - Z a||^2 + (N lam / d) ||a||^2 with N = p
                    random features on d coordinates (d required); equivalent
                    to the plain form at penalty n N lam / d.

    Solved through the normal equations on the smaller side of Z (the p x p
    primal for p <= n, the n x n dual otherwise); lam = 0 falls back to the
    minimum-norm solver.
    """
    if lam < 0:
        raise ValueError("lam must be >= 0")
    Z = np.asarray(Z, float)
    y = np.asarray(y, float)
    n, p = Z.shape
    if scaling == "plain":
        eff = lam
    elif scaling == "normalized":
        if d is None:
            raise ValueError("normalized scaling needs the ambient dimension d")
        eff = n * p * lam / d
    else:
        raise ValueError(f"unknown scaling {scaling!r}")
    if eff == 0.0:
        return fit_minnorm(Z, y)[0]
    if p <= n and p <= 20_000:
        G = Z.T @ Z + eff * np.eye(p)
        return scipy.linalg.cho_solve(scipy.linalg.cho_factor(G), Z.T @ y)
    G = Z @ Z.T + eff * np.eye(n)
    return Z.T @ scipy.linalg.cho_solve(scipy.linalg.cho_factor(G), y)


# ---------------------------------------------------------------------------
# targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TargetFunction:
    """Target f_star on S^{d-1}(sqrt(d)) with whatever moments are derivable.

    ``harmonic_parts`` maps degree k to the exact projection P_k f as a
    callable, when the decomposition is known in closed form.
    ``low_degree_power`` maps ell to ||P_{<= ell} f||^2.
    """

    name: str
    d: int
    fn: Callable[[np.ndarray], np.ndarray]
    R0: float | None = None
    harmonic_parts: dict[int, Callable[[np.ndarray], np.ndarray]] = field(default_factory=dict)
    low_degree_power: dict[int, float] = field(default_factory=dict)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return self.fn(X)

    def norm2(self) -> float:
        if self.R0 is None:
            raise ValueError(f"no closed-form second moment for {self.name}")
        return self.R0

    def residual_power(self, ell: int) -> float:
        """||P_{> ell} f||^2 from registered closed forms."""
        if ell not in self.low_degree_power:
            raise ValueError(f"no registered low-degree power at ell={ell} for {self.name}")
        return self.norm2() - self.low_degree_power[ell]


def quad_split(d: int) -> TargetFunction:
    """f(x) = sum_{i <= d/2} x_i^2 - sum_{i > d/2} x_i^2.

    For even d this is a pure degree-2 spherical harmonic with
    E[f^2] = 2 d^2/(d+2); sphere moments give the general closed form.
    """
    m = d // 2

    def fn(X):
        return (X[:, :m] ** 2).sum(axis=1) - (X[:, m:] ** 2).sum(axis=1)

    imbalance = 2 * m - d
    r0 = (2.0 * d * d + imbalance * imbalance * d) / (d + 2.0)
    parts = {2: fn} if d % 2 == 0 else {}
    power = {0: 0.0, 1: 0.0, 2: r0, 3: r0} if d % 2 == 0 else {}
    return TargetFunction("quad_split", d, fn, R0=r0,
                          harmonic_parts=parts, low_degree_power=power)


def cubic_hermite(d: int) -> TargetFunction:
    """f(x) = sum_i (x_i^3 - 3 x_i); odd, mean zero.

    E[x^6] = 15 d^2/((d+2)(d+4)) and E[x^4] = 3d/(d+2) on the sphere give
    R0 = d (15 d^2/((d+2)(d+4)) - 18 d/(d+2) + 9); the degree-1 projection
    puts coefficient -6/(d+2) on every coordinate, so
    ||P_{<=1} f||^2 = 36 d/(d+2)^2.
    """

    def fn(X):
        return (X ** 3 - 3.0 * X).sum(axis=1)

    r0 = d * (15.0 * d * d / ((d + 2.0) * (d + 4.0)) - 18.0 * d / (d + 2.0) + 9.0)
    lin = 36.0 * d / (d + 2.0) ** 2
    c = -6.0 / (d + 2.0)

    def p1(X):
        return c * X.sum(axis=1)

    def p3(X):
        return fn(X) - p1(X)

    return TargetFunction(
        "cubic_hermite", d, fn, R0=r0,
        harmonic_parts={1: p1, 3: p3},
        low_degree_power={0: 0.0, 1: lin, 2: lin, 3: r0},
    )


def single_neuron(act: ActivationSpec, w_star: np.ndarray) -> TargetFunction:
    """f(x) = sigma(<w_star, x>) with ||w_star|| = 1.

    E[f^2] is the activation's squared norm against the one-dimensional
    marginal and is registered exactly.
    """
    w = np.asarray(w_star, float)
    if abs(np.linalg.norm(w) - 1.0) > 1e-10:
        raise ValueError("w_star must be a unit vector")
    d = w.size
    x, wt = sphere.marginal_nodes(d, act.kinks)
    r0 = float(np.dot(wt, np.asarray(act.sigma(x), float) ** 2))
    return TargetFunction("single_neuron", d, lambda X: act.sigma(X @ w), R0=r0)


def _single_neuron_e1(d: int) -> TargetFunction:
    # registry entry: fixed teacher direction e_1 with the default activation
    from .spectrum import shifted_relu
    return single_neuron(shifted_relu(0.5), np.eye(d)[0])


def quad_plus_linear(d: int, mode: str = "all") -> TargetFunction:
    """quad_split plus a linear part: sum_i x_i (mode 'all') or x_1 ('e1')."""
    if d % 2 != 0:
        raise ValueError("quad_plus_linear requires even d")
    base = quad_split(d)
    if mode == "all":
        lin = lambda X: X.sum(axis=1)
        lin_power = float(d)
    elif mode == "e1":
        lin = lambda X: X[:, 0]
        lin_power = 1.0
    else:
        raise ValueError("mode must be all|e1")
    fn = lambda X: base.fn(X) + lin(X)
    r0 = base.R0 + lin_power
    return TargetFunction(
        f"quad_plus_linear[{mode}]", d, fn, R0=r0,
        harmonic_parts={1: lin, 2: base.fn},
        low_degree_power={0: 0.0, 1: lin_power, 2: r0, 3: r0},
    )


TARGETS: dict[str, Callable[[int], TargetFunction]] = {
    "quad_split": quad_split,
    "cubic_hermite": cubic_hermite,
    "quad_plus_all_linear": lambda d: quad_plus_linear(d, "all"),
    "quad_plus_x1": lambda d: quad_plus_linear(d, "e1"),
    "single_neuron": _single_neuron_e1,
}


# ---------------------------------------------------------------------------
# risks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    coef: np.ndarray
    train_mse: float
    test_mse: float
    R0: float
    normalized_risk: float
    rank: int
    cutoff: float


def estimate_risk(model: FeatureModel, target: TargetFunction,
                  n_test: int, seed: int) -> tuple[float, float]:
    """Monte Carlo test risk over fresh sphere samples and its normalization.

    R0 comes from the target's closed form when registered, otherwise from the
    same test sample (avoids ratio bias from an independent estimate).
    """
    X = sphere.sample_sphere(n_test, model.d, seed)
    f = target(X.points)
    err = f - model.predict(X.points)
    test_mse = float(np.mean(err ** 2))
    r0 = target.R0 if target.R0 is not None else float(np.mean(f ** 2))
    return test_mse, test_mse / r0


def rf_population_risk(act: ActivationSpec, theta: np.ndarray,
                       target: TargetFunction, n_draws: int = 200_000,
                       seed: int = 0, method: str = "mc", blocks: int = 10,
                       kmax: int = 40) -> tuple[float, float]:
    """Population risk of the rf model, min over coefficients at n = infinity.

    R = ||f||^2 - V' U^{-1} V with U_ij = E_x[sigma(<x,theta_i>/sqrt(d))
    sigma(<x,theta_j>/sqrt(d))] and V_i = E_x[f(x) sigma(<theta_i,x>/sqrt(d))],
    theta rows on S^{d-1}(sqrt(d)).

    method 'mc' estimates U, V from common random draws (block standard error
    reported); method 'series' uses the exact Gegenbauer expansion of U and the
    target's registered harmonic parts for V (stderr 0).
    """
    theta = np.asarray(theta, float)
    N, d = theta.shape
    norm2 = target.norm2()

    if method == "series":
        lam = activation_gegenbauer_coeffs(act, d, kmax)
        dims = np.array([dim_harmonics(d, k) for k in range(kmax + 1)])
        U = gegenbauer_series(lam ** 2 * dims, d, theta @ theta.T)
        V = np.zeros(N)
        for k, part in target.harmonic_parts.items():
            V += lam[k] * part(theta)
        return _solve_population(U, V, norm2), 0.0

    if method != "mc":
        raise ValueError("method must be mc|series")
    if N > 500:
        raise ValueError("mc population risk is limited to N <= 500 (dense solve)")
    if n_draws < 100_000:
        raise ValueError("need at least 1e5 common random draws")

    W = theta / sqrt(d)
    U = np.zeros((N, N))
    V = np.zeros(N)
    U_blocks = np.zeros((blocks, N, N))
    V_blocks = np.zeros((blocks, N))
    counts = np.zeros(blocks, dtype=int)
    chunk = 20_000
    done = 0
    while done < n_draws:
        m = min(chunk, n_draws - done)
        X = sphere.sample_sphere(m, d, sphere.derived_seed(seed, done)).points
        S = np.asarray(act.sigma(X @ W.T), float)
        f = target(X)
        U += S.T @ S
        V += S.T @ f
        b = (done * blocks) // n_draws
        U_blocks[b] += S.T @ S
        V_blocks[b] += S.T @ f
        counts[b] += m
        done += m
    U /= n_draws
    V /= n_draws
    point = _solve_population(U, V, norm2)
    per_block = np.array([
        _solve_population(U_blocks[b] / counts[b], V_blocks[b] / counts[b], norm2)
        for b in range(blocks) if counts[b] > 0
    ])
    stderr = float(per_block.std(ddof=1) / sqrt(len(per_block)))
    return point, stderr


def _solve_population(U: np.ndarray, V: np.ndarray, norm2: float) -> float:
    N = U.shape[0]
    jitter = 1e-10 * np.trace(U) / N
    try:
        c, low = scipy.linalg.cho_factor(U + jitter * np.eye(N))
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "population kernel matrix indefinite beyond jitter"
        ) from exc
    return norm2 - float(V @ scipy.linalg.cho_solve((c, low), V))
