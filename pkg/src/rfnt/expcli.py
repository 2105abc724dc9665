"""Experiment runner: config-driven sweeps, CSV emission, theorem checks.

Config files are flat ``key = value`` text with ``#`` comments; grid-valued
keys (``N``, ``n``, ``lambda``) take comma-separated lists.  A sweep runs one
task per (N, n, lambda, repetition) and writes one CSV row per task with the
fixed header

    model,target,d,N,p,n,lambda,seed,train_mse,test_mse,R0,normalized_risk,elapsed_s

Randomness is derived per repetition from the master seed, and grid points
within a repetition share weights, training pool and test sample (common
random numbers), so parallel and serial schedules produce identical files.
The elapsed_s column is 0 unless ``timing = true``: wall time is not
reproducible and the output contract is byte-identical reruns.

Exit codes: 0 ok, 1 threshold violation (theorem checks), 2 config error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import sqrt
from pathlib import Path

import numpy as np

from . import krr as krrmod
from . import labkit, linmodels, sphere, spectrum
from .linmodels import TARGETS, FeatureModel, TargetFunction

logger = logging.getLogger(__name__)

CSV_HEADER = ("model,target,d,N,p,n,lambda,seed,train_mse,test_mse,R0,"
              "normalized_risk,elapsed_s")
STAIRCASE_HEADER = "model,target,d,N,p,log_ratio,seed,risk,R0,normalized_risk"
SPECTRUM_HEADER = "d,k,xi,B,xi_times_B"
GRAM_HEADER = "d,k,N,seed,opnorm_deviation"
PLATEAU_HEADER = "target,d,ell,R0,residual_power,plateau_ratio"

MODELS = ("rf", "nt", "krr", "nn_sparse")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "rf"
    target: str = "quad_split"
    d: int = 30
    N_grid: tuple[int, ...] = (240,)
    n_grid: tuple[int, ...] = (1000,)
    lambda_grid: tuple[float, ...] = (0.0,)
    lambda_units: str = "absolute"      # absolute | lambda_star
    solver: str = "minnorm"             # minnorm | ridge
    ridge_scaling: str = "plain"        # plain | normalized
    kernel: str = "rf"                  # krr only: rf | nt
    u0: float = 0.5
    tau2: float = 0.0
    ell: int = 1
    kmax: int = 40
    repetitions: int = 10
    seed: int = 0
    n_test: int = 1500
    timing: bool = False
    staircase_oversample: int = 5
    out: str = "results.csv"

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}; have {sorted(TARGETS)}")
        if self.d < 2:
            raise ConfigError("d must be >= 2")
        if not self.N_grid or not self.n_grid or not self.lambda_grid:
            raise ConfigError("grids must be nonempty")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.solver not in ("minnorm", "ridge"):
            raise ConfigError("solver must be minnorm|ridge")
        if self.ridge_scaling not in ("plain", "normalized"):
            raise ConfigError("ridge_scaling must be plain|normalized")
        if self.lambda_units not in ("absolute", "lambda_star"):
            raise ConfigError("lambda_units must be absolute|lambda_star")
        if self.kernel not in ("rf", "nt"):
            raise ConfigError("kernel must be rf|nt")
        if self.tau2 < 0:
            raise ConfigError("tau2 must be >= 0")
        if (self.model != "krr" and self.solver == "minnorm"
                and any(l != 0.0 for l in self.lambda_grid)):
            raise ConfigError("solver=minnorm requires lambda = 0")


_GRID_KEYS = {"N": "N_grid", "n": "n_grid", "lambda": "lambda_grid"}
_INT_KEYS = {"d", "ell", "kmax", "repetitions", "seed", "n_test",
             "staircase_oversample"}
_FLOAT_KEYS = {"u0", "tau2"}
_BOOL_KEYS = {"timing"}
_STR_KEYS = {"model", "target", "solver", "ridge_scaling", "kernel",
             "lambda_units", "out"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key = value grammar; raise ConfigError on bad input."""
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _GRID_KEYS:
                parts = [p.strip() for p in value.split(",") if p.strip()]
                conv = float if key == "lambda" else int
                fields[_GRID_KEYS[key]] = tuple(conv(p) for p in parts)
            elif key in _INT_KEYS:
                fields[key] = int(value)
            elif key in _FLOAT_KEYS:
                fields[key] = float(value)
            elif key in _BOOL_KEYS:
                if value.lower() not in ("true", "false"):
                    raise ValueError(value)
                fields[key] = value.lower() == "true"
            elif key in _STR_KEYS:
                fields[key] = value
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    cfg = ExperimentConfig(**fields)
    cfg.validate()
    return cfg


def load_config(path: str) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


# ---------------------------------------------------------------------------
# sweep execution
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    model: str
    target: str
    d: int
    N: int
    p: int
    n: int
    lam: float
    seed: int
    train_mse: float
    test_mse: float
    R0: float
    elapsed_s: float

    @property
    def normalized_risk(self) -> float:
        return self.test_mse / self.R0

    def csv_row(self, timing: bool) -> str:
        elapsed = self.elapsed_s if timing else 0.0
        vals = [self.model, self.target, self.d, self.N, self.p, self.n,
                _fmt(self.lam), self.seed, _fmt(self.train_mse),
                _fmt(self.test_mse), _fmt(self.R0),
                _fmt(self.normalized_risk), _fmt(elapsed)]
        return ",".join(str(v) for v in vals)


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass
class _RepContext:
    """Per-repetition shared randomness: common random numbers across the grid."""

    rep: int
    seed: int
    weights: np.ndarray | None
    pool: sphere.SphereSample
    noise: np.ndarray
    target: TargetFunction


def _make_rep_context(cfg: ExperimentConfig, rep: int) -> _RepContext:
    rep_seed = sphere.derived_seed(cfg.seed, rep)
    d = cfg.d
    target = TARGETS[cfg.target](d)
    max_n = max(cfg.n_grid)
    pool = sphere.sample_sphere(max_n, d, sphere.derived_seed(rep_seed, 0))
    noise = (sqrt(cfg.tau2) * sphere.rng_for(rep_seed, 1).standard_normal(max_n)
             if cfg.tau2 > 0 else np.zeros(max_n))
    weights = None
    if cfg.model in ("rf", "nt"):
        weights = linmodels.sample_weights(max(cfg.N_grid), d,
                                           sphere.derived_seed(rep_seed, 2))
    elif cfg.model == "nn_sparse":
        weights = linmodels.sparse_nn_weights(max(cfg.N_grid), d,
                                              sphere.derived_seed(rep_seed, 2))
    return _RepContext(rep=rep, seed=rep_seed, weights=weights, pool=pool,
                       noise=noise, target=target)


def _kernel_for(cfg: ExperimentConfig):
    act = spectrum.shifted_relu(cfg.u0)
    if cfg.kernel == "rf":
        kern = spectrum.rf_kernel(act, cfg.d, cfg.kmax)
        return kern, kern.spectrum
    kern = spectrum.nt_kernel(act, cfg.d, cfg.kmax)
    return kern, kern.spectrum()


def _run_task(cfg: ExperimentConfig, ctx: _RepContext, N: int, n: int,
              lam: float, kernel_bundle) -> RunRecord:
    t0 = time.perf_counter()
    d = cfg.d
    target = ctx.target
    X = sphere.SphereSample(ctx.pool.points[:n])
    y = target(X.points) + ctx.noise[:n]
    test_seed = sphere.derived_seed(ctx.seed, 3)

    if cfg.model == "krr":
        kern, spec = kernel_bundle
        lam_abs = lam * spec.lambda_star(cfg.ell) if cfg.lambda_units == "lambda_star" else lam
        K = krrmod.assemble_kernel(kern, X)
        model = krrmod.krr_fit(K, y, lam_abs, noise_tau2=cfg.tau2)
        train = krrmod.krr_empirical_risk(model)
        test = krrmod.krr_test_risk(model, target, cfg.n_test, test_seed)
        p = n
    else:
        act = spectrum.shifted_relu(cfg.u0)
        kind = "nt" if cfg.model == "nt" else "rf"
        model = FeatureModel(kind=kind, W=ctx.weights[:N], activation=act,
                             check_norms=cfg.model != "nn_sparse")
        Z = linmodels.build_design(model, X)
        if cfg.solver == "minnorm":
            if lam != 0.0:
                raise ConfigError("solver=minnorm requires lambda = 0")
            coef, _ = linmodels.fit_minnorm(Z, y)
        else:
            coef = linmodels.fit_ridge(Z, y, lam, scaling=cfg.ridge_scaling, d=d)
        model.coef = coef
        train = float(np.mean((y - Z @ coef) ** 2))
        test, _ = linmodels.estimate_risk(model, target, cfg.n_test, test_seed)
        p = model.p

    r0 = target.R0 if target.R0 is not None else float(
        np.mean(target(sphere.sample_sphere(cfg.n_test, d, test_seed).points) ** 2))
    return RunRecord(model=cfg.model, target=cfg.target, d=d, N=N, p=p, n=n,
                     lam=lam, seed=ctx.seed, train_mse=train, test_mse=test,
                     R0=r0, elapsed_s=time.perf_counter() - t0)


def _run_rep(cfg: ExperimentConfig, rep: int, kernel_bundle):
    """All grid tasks of one repetition, in deterministic grid order."""
    ctx = _make_rep_context(cfg, rep)
    rows = []
    for N in cfg.N_grid:
        for n in cfg.n_grid:
            for lam in cfg.lambda_grid:
                try:
                    rows.append((None, _run_task(cfg, ctx, N, n, lam, kernel_bundle)))
                except Exception as exc:   # noqa: BLE001 - errors become rows
                    rows.append(((N, n, lam, ctx.seed, f"{type(exc).__name__}: {exc}"),
                                 None))
    return rows


def run_sweep(cfg: ExperimentConfig, threads: int = 1,
              out: str | None = None) -> Path:
    """Execute the sweep and write the CSV; returns the output path.

    Per-task failures go to ``<out>.errors.csv`` and the run continues.
    """
    cfg.validate()
    kernel_bundle = _kernel_for(cfg) if cfg.model == "krr" else None
    reps = range(cfg.repetitions)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_rep = list(pool.map(lambda r: _run_rep(cfg, r, kernel_bundle), reps))
    else:
        per_rep = [_run_rep(cfg, r, kernel_bundle) for r in reps]

    path = Path(out if out is not None else cfg.out)
    lines = [CSV_HEADER]
    errors = []
    for rep_rows in per_rep:
        for err, rec in rep_rows:
            if rec is not None:
                lines.append(rec.csv_row(cfg.timing))
            else:
                errors.append(err)
    path.write_text("\n".join(lines) + "\n")
    if errors:
        err_path = Path(str(path) + ".errors.csv")
        err_lines = ["N,n,lambda,seed,error"]
        err_lines += [f"{N},{n},{_fmt(lam)},{seed},\"{msg}\""
                      for (N, n, lam, seed, msg) in errors]
        err_path.write_text("\n".join(err_lines) + "\n")
        logger.warning("%d task(s) failed; see %s", len(errors), err_path)
    return path


# ---------------------------------------------------------------------------
# staircase
# ---------------------------------------------------------------------------

def run_staircase(cfg: ExperimentConfig, out: str | None = None) -> Path:
    """Population approximation risk against log(#params)/log d over the N grid.

    rf uses the exact-series population risk; nt uses a large-n empirical fit
    (n = staircase_oversample * p), which tracks the population value once n
    dominates p.
    """
    cfg.validate()
    if cfg.model not in ("rf", "nt"):
        raise ConfigError("staircase supports model rf|nt")
    d = cfg.d
    target = TARGETS[cfg.target](d)
    act = spectrum.shifted_relu(cfg.u0)
    r0 = target.norm2()
    lines = [STAIRCASE_HEADER]
    for rep in range(cfg.repetitions):
        rep_seed = sphere.derived_seed(cfg.seed, rep)
        for N in cfg.N_grid:
            p = N if cfg.model == "rf" else N * d
            if cfg.model == "rf":
                theta = sphere.sample_sphere(N, d, sphere.derived_seed(rep_seed, 2))
                risk, _ = linmodels.rf_population_risk(
                    act, theta.points, target, method="series", kmax=cfg.kmax)
            else:
                n = cfg.staircase_oversample * p
                W = linmodels.sample_weights(N, d, sphere.derived_seed(rep_seed, 2))
                model = FeatureModel(kind="nt", W=W, activation=act)
                X = sphere.sample_sphere(n, d, sphere.derived_seed(rep_seed, 0))
                Z = linmodels.build_design(model, X)
                coef, _ = linmodels.fit_minnorm(Z, target(X.points))
                model.coef = coef
                risk, _ = linmodels.estimate_risk(
                    model, target, cfg.n_test, sphere.derived_seed(rep_seed, 3))
            log_ratio = np.log(p) / np.log(d)
            lines.append(",".join(str(v) for v in [
                cfg.model, cfg.target, d, N, p, _fmt(log_ratio), rep_seed,
                _fmt(risk), _fmt(r0), _fmt(risk / r0)]))
    path = Path(out if out is not None else cfg.out)
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# other emitters
# ---------------------------------------------------------------------------

def write_spectrum(kernel: str, d: int, u0: float, kmax: int, out: str) -> Path:
    act = spectrum.shifted_relu(u0)
    if kernel == "rf":
        spec = spectrum.rf_kernel(act, d, kmax).spectrum
    elif kernel == "nt":
        spec = spectrum.nt_kernel(act, d, kmax).spectrum()
    else:
        raise ConfigError("kernel must be rf|nt")
    lines = [SPECTRUM_HEADER]
    for k in range(spec.max_degree + 1):
        b = spec.dims[k]
        lines.append(f"{d},{k},{_fmt(spec.xi[k])},{int(b)},{_fmt(spec.xi[k] * b)}")
    path = Path(out)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_gram(d: int, k: int, N: int, seeds, out: str) -> Path:
    lines = [GRAM_HEADER]
    diag = labkit.gram_deviation(d, k, N, seeds)
    for s, dev in zip(seeds, diag.deviations):
        lines.append(f"{d},{k},{N},{s},{_fmt(dev)}")
    path = Path(out)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_plateau(target_name: str, d: int, ells, out: str | None) -> list[str]:
    target = TARGETS[target_name](d)
    lines = [PLATEAU_HEADER]
    for ell in ells:
        resid = target.residual_power(ell)
        lines.append(f"{target_name},{d},{ell},{_fmt(target.norm2())},"
                     f"{_fmt(resid)},{_fmt(resid / target.norm2())}")
    if out:
        Path(out).write_text("\n".join(lines) + "\n")
    return lines


# ---------------------------------------------------------------------------
# theorem checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    lines: list[str] = field(default_factory=list)


def check_rf_decomposition(seed: int = 0) -> CheckResult:
    """Population-risk decomposition, d=30, N=500, f = quad_split + sum_i x_i:
    |R(f) - R(P_{<=1} f) - ||P_{>1} f||^2| <= 0.1 ||f|| ||P_{>1} f|| + mc err,
    3 of 3 seeds."""
    d, N = 30, 500
    act = spectrum.shifted_relu(0.5)
    target = linmodels.quad_plus_linear(d, "all")
    low = TargetFunction("P<=1 f", d, lambda X: X.sum(axis=1), R0=float(d))
    resid = target.residual_power(1)
    tol = 0.1 * sqrt(target.norm2()) * sqrt(resid)
    lines, ok = [], True
    for rep in range(3):
        s = sphere.derived_seed(seed, rep)
        theta = sphere.sample_sphere(N, d, s).points
        rf_full, se_full = linmodels.rf_population_risk(
            act, theta, target, n_draws=200_000, seed=s)
        rf_low, se_low = linmodels.rf_population_risk(
            act, theta, low, n_draws=200_000, seed=s)
        lhs = abs(rf_full - rf_low - resid)
        budget = tol + se_full + se_low
        good = lhs <= budget
        ok &= good
        lines.append(f"  seed {rep}: |{rf_full:.3f} - {rf_low:.3f} - {resid:.3f}|"
                     f" = {lhs:.3f}  vs  {tol:.3f} + mc {se_full + se_low:.3f}"
                     f"  -> {'ok' if good else 'VIOLATED'}")
    return CheckResult("rf_decomposition", ok, lines)


def _krr_setup(seed_rep: int, lam_frac: float):
    d, n, tau2, ell = 50, 800, 0.01, 1
    act = spectrum.shifted_relu(0.5)
    target = linmodels.quad_plus_linear(d, "e1")
    kern = spectrum.rf_kernel(act, d, 40)
    spec = kern.spectrum
    lam = lam_frac * spec.lambda_star(ell)
    X = sphere.sample_sphere(n, d, sphere.derived_seed(seed_rep, 0))
    y = krrmod.make_labels(target, X, sqrt(tau2), seed_rep)
    K = krrmod.assemble_kernel(kern, X)
    model = krrmod.krr_fit(K, y, lam, noise_tau2=tau2)
    return model, target, spec, ell, tau2


def check_krr_plateau(seed: int = 0) -> CheckResult:
    """KRR risk against the degree->1 plateau at d=50, n=800, lam=0.5 lam_*."""
    risks = []
    target = linmodels.quad_plus_linear(50, "e1")
    resid = target.residual_power(1)
    tau2 = 0.01
    tol = 0.2 * (target.norm2() + tau2)
    for rep in range(5):
        s = sphere.derived_seed(seed, rep)
        model, tgt, _, _, _ = _krr_setup(s, 0.5)
        risks.append(krrmod.krr_test_risk(model, tgt, 1500,
                                          sphere.derived_seed(s, 3)))
    med = float(np.median(risks))
    dev = abs(med - resid)
    ok = dev <= tol
    lines = [f"  median risk {med:.2f}, plateau {resid:.2f}, "
             f"|dev| = {dev:.2f} vs tol {tol:.2f} -> {'ok' if ok else 'VIOLATED'}"]
    return CheckResult("krr_plateau", ok, lines)


def check_interpolator_bound(seed: int = 0) -> CheckResult:
    """Empirical-risk bound R^ <= 1.2 (||f||^2 + tau^2)(lam/(lam+kappa))^2 at
    lam in {0.1, 0.5, 0.9} lam_*, all 5 seeds; kappa in complement form."""
    lines, ok = [], True
    for frac in (0.1, 0.5, 0.9):
        for rep in range(5):
            s = sphere.derived_seed(seed, rep)
            model, target, spec, ell, tau2 = _krr_setup(s, frac)
            kappa = spec.kappa_tail(ell)
            emp = krrmod.krr_empirical_risk(model)
            bound = 1.2 * (target.norm2() + tau2) * (model.lam / (model.lam + kappa)) ** 2
            good = emp <= bound
            ok &= good
            if rep == 0 or not good:
                lines.append(f"  lam={frac} lam_*, seed {rep}: "
                             f"emp {emp:.4f} <= bound {bound:.4f}"
                             f" -> {'ok' if good else 'VIOLATED'}")
    return CheckResult("interpolator_bound", ok, lines)


def check_gram_concentration(seed: int = 0) -> CheckResult:
    """||W - I||_op <= 0.5 at d=100, k=2, N=100 in >= 4 of 5 seeds, and the
    median decreases along d in {50, 100, 200}."""
    seeds = [sphere.derived_seed(seed, r) for r in range(5)]
    medians = {}
    lines = []
    for d in (50, 100, 200):
        diag = labkit.gram_deviation(d, 2, 100, seeds)
        medians[d] = diag.median
        lines.append(f"  d={d}: deviations {[f'{v:.3f}' for v in diag.deviations]}"
                     f" median {diag.median:.3f}")
    at100 = labkit.gram_deviation(100, 2, 100, seeds)
    hits = sum(v <= 0.5 for v in at100.deviations)
    dec = medians[50] > medians[100] > medians[200]
    ok = hits >= 4 and dec
    lines.append(f"  {hits}/5 seeds <= 0.5 at d=100; medians decreasing: {dec}")
    return CheckResult("gram_concentration", ok, lines)


CHECKS = {
    "rf_decomposition": check_rf_decomposition,
    "krr_plateau": check_krr_plateau,
    "interpolator_bound": check_interpolator_bound,
    "gram_concentration": check_gram_concentration,
}


def theorem_check(name: str, seed: int = 0) -> CheckResult:
    if name not in CHECKS:
        raise ConfigError(f"unknown check {name!r}; have {sorted(CHECKS)}")
    return CHECKS[name](seed)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--out", help="output path (overrides config)")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rfnt", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a sweep from a config file")
    sim.add_argument("--config", required=True)
    _add_common(sim)

    st = sub.add_parser("staircase", help="population approximation staircase")
    st.add_argument("--config", required=True)
    _add_common(st)

    sp = sub.add_parser("spectrum", help="dump kernel eigenvalues to CSV")
    sp.add_argument("--kernel", choices=("rf", "nt"), default="rf")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--u0", type=float, default=0.5)
    sp.add_argument("--kmax", type=int, default=40)
    sp.add_argument("--out", required=True)
    sp.add_argument("--verbose", action="store_true")

    tc = sub.add_parser("theorem-check", help="run a named acceptance scenario")
    tc.add_argument("name", choices=sorted(CHECKS))
    tc.add_argument("--seed", type=int, default=0)
    tc.add_argument("--verbose", action="store_true")

    gr = sub.add_parser("gram", help="Gegenbauer Gram concentration diagnostic")
    gr.add_argument("--d", type=int, required=True)
    gr.add_argument("--k", type=int, required=True)
    gr.add_argument("--N", type=int, required=True)
    gr.add_argument("--seeds", default="0,1,2,3,4",
                    help="comma-separated seed list")
    gr.add_argument("--out", required=True)
    gr.add_argument("--verbose", action="store_true")

    pl = sub.add_parser("plateau", help="print plateau levels ||P_>ell f||^2")
    pl.add_argument("--target", required=True, choices=sorted(TARGETS))
    pl.add_argument("--d", type=int, required=True)
    pl.add_argument("--ell", default="1,2",
                    help="comma-separated degree list")
    pl.add_argument("--out")
    pl.add_argument("--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command in ("simulate", "staircase"):
            cfg = load_config(args.config)
            if args.seed is not None:
                cfg = replace(cfg, seed=args.seed)
            if args.command == "simulate":
                path = run_sweep(cfg, threads=args.threads, out=args.out)
            else:
                path = run_staircase(cfg, out=args.out)
            print(path)
            return 0
        if args.command == "spectrum":
            print(write_spectrum(args.kernel, args.d, args.u0, args.kmax, args.out))
            return 0
        if args.command == "gram":
            seeds = [int(s) for s in args.seeds.split(",")]
            print(write_gram(args.d, args.k, args.N, seeds, args.out))
            return 0
        if args.command == "plateau":
            ells = [int(s) for s in args.ell.split(",")]
            for line in write_plateau(args.target, args.d, ells, args.out):
                print(line)
            return 0
        if args.command == "theorem-check":
            result = theorem_check(args.name, args.seed)
            for line in result.lines:
                print(line)
            print(f"{result.name}: {'PASS' if result.passed else 'FAIL'}")
            return 0 if result.passed else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
