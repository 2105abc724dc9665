"""Acceptance suite: criteria A1-A12, one test per criterion, each printing a
PASS/FAIL line with the measured quantities (run with ``pytest -v -s``).

A13 (figure generation) belongs to the plotting frontend and is exercised by
its own test suite against golden CSVs produced by this package.

Four sub-checks are red by measurement, not by implementation defect: the
pinned experiment sizes sit outside the asymptotic regimes those criteria
probe, so the asserted windows cannot hold.  Each failing test prints the
measured values; the analysis lives in the project notes.
"""

import numpy as np
import pytest

from math import factorial, sqrt

from rfnt import expcli, krr, labkit, linmodels as lm, sphere, spectrum as sp
from rfnt.specialfn import GegenbauerEvaluator, dim_harmonics


SEED = 0


def report(name: str, ok: bool, detail: str) -> None:
    print(f"\n{name} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"{name}: {detail}"


def _risk_seeds(model_kind, d, N, n, target_factory, n_seeds, act=None):
    act = act or sp.shifted_relu(0.5)
    target = target_factory(d)
    risks = []
    for rep in range(n_seeds):
        s = sphere.derived_seed(SEED, rep)
        if model_kind == "nn_sparse":
            W = lm.sparse_nn_weights(N, d, sphere.derived_seed(s, 2))
            model = lm.FeatureModel("rf", W, act, check_norms=False)
        else:
            W = lm.sample_weights(N, d, sphere.derived_seed(s, 2))
            model = lm.FeatureModel(model_kind, W, act)
        X = sphere.sample_sphere(n, d, sphere.derived_seed(s, 0))
        Z = lm.build_design(model, X)
        model.coef, _ = lm.fit_minnorm(Z, target(X.points))
        _, norm_risk = lm.estimate_risk(model, target, 1500,
                                        sphere.derived_seed(s, 3))
        risks.append(norm_risk)
    return risks


def test_A1_gegenbauer_orthonormality():
    worst = 0.0
    for d in (10, 50, 100):
        x, w = sphere.marginal_nodes(d)
        table = GegenbauerEvaluator(d, 8).table(np.sqrt(d) * x)
        for j in range(9):
            for k in range(9):
                val = dim_harmonics(d, k) * float(np.dot(w, table[j] * table[k]))
                worst = max(worst, abs(val - (1.0 if j == k else 0.0)))
    report("A1", worst <= 1e-6,
           f"max |B(d,k) <Q_j,Q_k> - delta| = {worst:.3g} (tol 1e-6)")


def test_A2_hermite_limit():
    act = sp.shifted_relu(0.5)
    mu = sp.hermite_coeffs_upto(act.sigma, 5, kinks=act.kinks)
    gaps = {}
    for d in (20, 80, 320):
        lam = sp.activation_gegenbauer_coeffs(act, d, 5)
        scale = np.sqrt([dim_harmonics(d, k) * factorial(k) for k in range(6)])
        gaps[d] = np.abs(lam * scale - mu)
    tol = 0.05 * np.maximum(np.abs(mu), 0.05)
    bad = []
    for k in range(6):
        if not (gaps[20][k] > gaps[80][k] > gaps[320][k]):
            bad.append(f"k={k} gaps {gaps[20][k]:.5f}->{gaps[80][k]:.5f}"
                       f"->{gaps[320][k]:.5f} not strictly decreasing")
        if gaps[320][k] > tol[k]:
            bad.append(f"k={k} final gap {gaps[320][k]:.4f} > {tol[k]:.4f}")
    report("A2", not bad, "; ".join(bad) if bad else
           "gaps strictly decreasing over d in {20,80,320}, k <= 5, "
           f"max final gap {gaps[320].max():.2g}")


def test_A3_step_hermite_closed_form():
    got = sp.hermite_coeffs_upto(lambda u: (u >= 0).astype(float), 9, kinks=(0.0,))
    want = np.zeros(10)
    want[0] = 0.5
    for k in range(1, 10, 2):
        df = 1
        j = k - 2
        while j > 1:
            df *= j
            j -= 2
        want[k] = (-1) ** ((k - 1) // 2) * df / np.sqrt(2 * np.pi)
    err = np.max(np.abs(got - want))
    report("A3", err <= 1e-8, f"max |mu_k - closed form| = {err:.3g} (tol 1e-8)")


def test_A4_rf_fails_on_quadratic():
    risks = _risk_seeds("rf", d=30, N=240, n=20_000,
                        target_factory=lm.quad_split, n_seeds=10)
    med = float(np.median(risks))
    report("A4", 0.85 <= med <= 1.1,
           f"median normalized risk {med:.3f} over 10 seeds, window [0.85, 1.10]"
           " (exact population value at this size is ~0.65: with N/B(d,2) = 0.52"
           " the random features genuinely absorb a third of the quadratic)")


@pytest.fixture(scope="module")
def nt_d20_fits():
    """Shared NT fits at d=20, N=160, n=16000 for the quadratic and cubic
    targets (same weights and samples, two label vectors)."""
    act = sp.shifted_relu(0.5)
    d, N, n = 20, 160, 16_000
    out = {"quad": [], "cubic": []}
    for rep in range(5):
        s = sphere.derived_seed(SEED, rep)
        W = lm.sample_weights(N, d, sphere.derived_seed(s, 2))
        model = lm.FeatureModel("nt", W, act)
        X = sphere.sample_sphere(n, d, sphere.derived_seed(s, 0))
        Z = lm.build_design(model, X)
        for key, factory in (("quad", lm.quad_split), ("cubic", lm.cubic_hermite)):
            target = factory(d)
            model.coef, _ = lm.fit_minnorm(Z, target(X.points))
            _, norm_risk = lm.estimate_risk(model, target, 1500,
                                            sphere.derived_seed(s, 3))
            out[key].append(norm_risk)
    return out


def test_A5_nt_learns_quadratic(nt_d20_fits):
    med = float(np.median(nt_d20_fits["quad"]))
    report("A5", med <= 0.2,
           f"median normalized risk {med:.3f} over 5 seeds (must be <= 0.2)")


def test_A6_nt_fails_on_cubic(nt_d20_fits):
    med = float(np.median(nt_d20_fits["cubic"]))
    report("A6", med >= 0.75,
           f"median normalized risk {med:.3f} over 5 seeds (must be >= 0.75)")


@pytest.fixture(scope="module")
def nt_d30_cubic_risks():
    return _risk_seeds("nt", d=30, N=240, n=10_000,
                       target_factory=lm.cubic_hermite, n_seeds=5)


def test_A7_sparse_nn_beats_nt_on_cubic(nt_d30_cubic_risks):
    sparse = _risk_seeds("nn_sparse", d=30, N=240, n=10_000,
                         target_factory=lm.cubic_hermite, n_seeds=5)
    nt_med = float(np.median(nt_d30_cubic_risks))
    sp_med = float(np.median(sparse))
    report("A7", sp_med <= nt_med - 0.3,
           f"sparse median {sp_med:.3f} vs nt median {nt_med:.3f} "
           f"(need sparse <= nt - 0.3)")


def test_A8_rf_risk_decomposition():
    d, N = 30, 500
    act = sp.shifted_relu(0.5)
    target = lm.quad_plus_linear(d, "all")
    low = lm.TargetFunction("low", d, lambda X: X.sum(axis=1), R0=float(d))
    resid = target.residual_power(1)
    tol = 0.1 * sqrt(target.norm2()) * sqrt(resid)
    lines, ok = [], True
    for rep in range(3):
        s = sphere.derived_seed(SEED, rep)
        theta = sphere.sample_sphere(N, d, s).points
        r_full, se_full = lm.rf_population_risk(act, theta, target,
                                                n_draws=200_000, seed=s)
        r_low, se_low = lm.rf_population_risk(act, theta, low,
                                              n_draws=200_000, seed=s)
        lhs = abs(r_full - r_low - resid)
        budget = tol + se_full + se_low
        ok &= lhs <= budget
        lines.append(f"seed {rep}: |{r_full:.2f} - {r_low:.2f} - {resid:.2f}| "
                     f"= {lhs:.2f} vs {budget:.2f}")
    report("A8", ok, "; ".join(lines) +
           " (N=500 exceeds B(30,2)=464, so the features capture most of the"
           " quadratic and the finite-size deviation is ~5x the window)")


def _krr_fit_at(seed_rep: int, lam_frac: float):
    d, n, tau2, ell = 50, 800, 0.01, 1
    act = sp.shifted_relu(0.5)
    target = lm.quad_plus_linear(d, "e1")
    kern = sp.rf_kernel(act, d, 40)
    lam = lam_frac * kern.spectrum.lambda_star(ell)
    X = sphere.sample_sphere(n, d, sphere.derived_seed(seed_rep, 0))
    y = krr.make_labels(target, X, sqrt(tau2), seed_rep)
    model = krr.krr_fit(krr.assemble_kernel(kern, X), y, lam, noise_tau2=tau2)
    return model, target, kern.spectrum, ell, tau2


def test_A9_krr_plateau():
    target = lm.quad_plus_linear(50, "e1")
    resid = target.residual_power(1)
    tau2 = 0.01
    tol = 0.2 * (target.norm2() + tau2)
    risks = []
    for rep in range(5):
        s = sphere.derived_seed(SEED, rep)
        model, tgt, _, _, _ = _krr_fit_at(s, 0.5)
        risks.append(krr.krr_test_risk(model, tgt, 1500, sphere.derived_seed(s, 3)))
    med = float(np.median(risks))
    dev = abs(med - resid)
    report("A9", dev <= tol,
           f"median risk {med:.2f} vs plateau {resid:.2f}: |dev| {dev:.2f} > tol"
           f" {tol:.2f} (at n=800, d=50 the degree-2 eigenvalue gives"
           f" n*xi_2 ~ 0.4*lambda_*, so the kernel half-learns the quadratic)")


def test_A10_interpolator_bound():
    lines, ok = [], True
    for frac in (0.1, 0.5, 0.9):
        worst = -np.inf
        for rep in range(5):
            s = sphere.derived_seed(SEED, rep)
            model, target, spec, ell, tau2 = _krr_fit_at(s, frac)
            kappa = spec.kappa_tail(ell)
            emp = krr.krr_empirical_risk(model)
            bound = 1.2 * (target.norm2() + tau2) * \
                (model.lam / (model.lam + kappa)) ** 2
            ok &= emp <= bound
            worst = max(worst, emp / bound)
        lines.append(f"lam={frac} lam_*: max emp/bound = {worst:.3f}")
    report("A10", ok, "; ".join(lines) + " (all 5 seeds each)")


def test_A11_gram_concentration():
    seeds = [sphere.derived_seed(SEED, r) for r in range(5)]
    medians = {}
    for d in (50, 100, 200):
        medians[d] = labkit.gram_deviation(d, 2, 100, seeds).median
    at100 = labkit.gram_deviation(100, 2, 100, seeds)
    hits = sum(v <= 0.5 for v in at100.deviations)
    decreasing = medians[50] > medians[100] > medians[200]
    report("A11", hits >= 4 and decreasing,
           f"{hits}/5 seeds <= 0.5 at d=100; medians "
           f"{medians[50]:.3f} > {medians[100]:.3f} > {medians[200]:.3f}: "
           f"{decreasing}")


def test_A12_byte_identical_csv(tmp_path):
    conf = ("model = rf\ntarget = quad_split\nd = 10\nN = 30\n"
            "n = 200, 400\nlambda = 0\nsolver = minnorm\nrepetitions = 3\n"
            f"seed = 11\nn_test = 300\nout = {tmp_path / 'a.csv'}\n")
    p = tmp_path / "exp.conf"
    p.write_text(conf)
    assert expcli.main(["simulate", "--config", str(p)]) == 0
    assert expcli.main(["simulate", "--config", str(p),
                        "--out", str(tmp_path / "b.csv")]) == 0
    assert expcli.main(["simulate", "--config", str(p), "--threads", "4",
                        "--out", str(tmp_path / "c.csv")]) == 0
    a = (tmp_path / "a.csv").read_bytes()
    same = a == (tmp_path / "b.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()
    report("A12", same, "rerun and 4-thread run byte-identical to first run")
