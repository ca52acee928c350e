"""Ensemble orchestration, statistics, validation checks, and file artifacts.

Experiments are driven by a single JSON config.  Every artifact write is
deterministic: floats go through repr, JSON keys are sorted, and paths are
aggregated in path-id order regardless of how many workers produced them, so
identical configs give byte-identical outputs.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bell
from .basis import (
    BasisPair,
    ScaledBasis,
    ScalingSequence,
    inclusion_hs_norm,
    q_lambda_trace,
    verify_rapid_decay,
)
from .circlefn import AffineCircleMap, CircleFunction, compose, grid_points, sobolev_embedding_constant
from .flow import (
    FlowState,
    SimulationDiverged,
    SolverConfig,
    euler_step,
    flow_compose_check,
    simulate_path,
    stratonovich_correction,
    truncation_scale,
)
from .noise import ModeIncrement, NoiseStream

__all__ = [
    "ConfigError",
    "RunConfig",
    "EnsembleSummary",
    "run_experiment",
    "run_ensemble",
    "hitting_time_stats",
    "contrast_h32",
    "validation_checks",
    "SUMMARY_SCHEMA_VERSION",
]

SUMMARY_SCHEMA_VERSION = "circleflow-summary-1"

EXPERIMENTS = ("simulate", "validate", "hitting_times", "flow_check", "contrast_h32")

DEFAULT_RADII = (0.05, 0.1, 0.2, 0.4)


class ConfigError(ValueError):
    """Configuration file failed to parse or validate."""


@dataclass(frozen=True)
class RunConfig:
    """Full experiment description: solver settings plus orchestration."""

    solver: SolverConfig
    experiment: str = "simulate"
    n_paths: int = 1
    master_seed: int = 20240817
    record_every: int = 1
    output_dir: str = "out"
    workers: int = 1
    radii: tuple = DEFAULT_RADII
    xi_kind: str = "sine"
    xi_amplitude: float = 0.1
    flow_tolerance: float = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.n_paths < 1:
            raise ConfigError("n_paths must be >= 1")
        if self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.xi_kind not in ("identity", "rotation", "sine"):
            raise ConfigError("xi_kind must be identity, rotation, or sine")

    def to_dict(self):
        d = {
            "experiment": self.experiment,
            "n_paths": self.n_paths,
            "master_seed": self.master_seed,
            "record_every": self.record_every,
            "output_dir": self.output_dir,
            "workers": self.workers,
            "radii": list(self.radii),
            "xi_kind": self.xi_kind,
            "xi_amplitude": self.xi_amplitude,
            "solver": self.solver.to_dict(),
        }
        if self.flow_tolerance is not None:
            d["flow_tolerance"] = self.flow_tolerance
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            d = dict(d)
            solver = SolverConfig.from_dict(d.pop("solver"))
            d["radii"] = tuple(d.get("radii", DEFAULT_RADII))
            return cls(solver=solver, **d)
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(str(exc)) from exc


@dataclass
class EnsembleSummary:
    """Aggregated diagnostics for one ensemble run."""

    n_paths: int
    tau_r: list
    times: list
    hk_quantiles: dict
    min_deriv_quantiles: dict
    decay_fit_exponent: float
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def all_passed(self):
        return all(c["passed"] for c in self.checks)

    def to_dict(self):
        decay = self.decay_fit_exponent
        return {
            "schema": SUMMARY_SCHEMA_VERSION,
            "n_paths": self.n_paths,
            "tau_r": self.tau_r,
            "times": self.times,
            "hk_quantiles": self.hk_quantiles,
            "min_deriv_quantiles": self.min_deriv_quantiles,
            "decay_fit_exponent": decay if decay is not None and np.isfinite(decay) else None,
            "checks": self.checks,
            "extra": self.extra,
        }


# ---------------------------------------------------------------------------
# Path execution
# ---------------------------------------------------------------------------


def _run_one_path(args):
    cfg_dict, path_id, record_every, stop_after_hit = args
    cfg = RunConfig.from_dict(cfg_dict)
    stream = NoiseStream(
        cfg.master_seed, path_id, cfg.solver.mode_cutoff, cfg.solver.dt
    )
    return simulate_path(
        cfg.solver, stream, record_every=record_every, stop_after_hit=stop_after_hit
    )


def run_ensemble(cfg, stop_after_hit=False, solver=None):
    """All paths of the configured ensemble, aggregated in path-id order."""
    work = cfg if solver is None else replace_solver(cfg, solver)
    args = [
        (work.to_dict(), pid, work.record_every, stop_after_hit)
        for pid in range(work.n_paths)
    ]
    if work.workers > 1:
        with ProcessPoolExecutor(max_workers=work.workers) as pool:
            records = list(pool.map(_run_one_path, args))
    else:
        records = [_run_one_path(a) for a in args]
    return sorted(records, key=lambda r: r.path_id)


def replace_solver(cfg, solver):
    d = cfg.to_dict()
    d["solver"] = solver.to_dict()
    return RunConfig.from_dict(d)


def summarize(records, cfg):
    """Quantile series, hitting times, and the spectral decay fit."""
    tau = [r.tau_r for r in records]
    aligned = len({tuple(s.t for s in r.samples) for r in records}) == 1
    times, hk_q, md_q = [], {}, {}
    if aligned:
        times = [s.t for s in records[0].samples]
        hk = np.array([[s.hk for s in r.samples] for r in records])
        md = np.array([[s.min_deriv for s in r.samples] for r in records])
        qs = (5, 50, 95)
        hk_q = {f"p{q:02d}": np.percentile(hk, q, axis=0).tolist() for q in qs}
        md_q = {f"p{q:02d}": np.percentile(md, q, axis=0).tolist() for q in qs}
    return EnsembleSummary(
        n_paths=len(records),
        tau_r=tau,
        times=times,
        hk_quantiles=hk_q,
        min_deriv_quantiles=md_q,
        decay_fit_exponent=_decay_fit([r.final_state for r in records]),
    )


def _decay_fit(finals):
    """Exponent p of the exponential fit amp(n) ~ exp(-p n) of final states."""
    finals = [f for f in finals if f is not None]
    if not finals:
        return float("nan")
    amps = []
    for f in finals:
        a, b = f.coefficients
        amps.append(np.hypot(a[1:], b[1:]))
    mean_amp = np.mean(amps, axis=0)
    n = np.arange(1, mean_amp.size + 1, dtype=float)
    keep = mean_amp > 1e-300
    if keep.sum() < 2:
        return float("nan")
    slope = np.polyfit(n[keep], np.log(mean_amp[keep]), 1)[0]
    return float(-slope)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------


def run_experiment(cfg):
    """Dispatch on the configured experiment; returns (exit_code, artifacts)."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if cfg.experiment == "simulate":
            records = run_ensemble(cfg)
            summary = summarize(records, cfg)
            _write_paths_csv(out / "paths.csv", records)
            _write_json(out / "summary.json", summary.to_dict())
            return 0, [out / "paths.csv", out / "summary.json"]
        if cfg.experiment == "hitting_times":
            return _run_hitting(cfg, out)
        if cfg.experiment == "flow_check":
            return _run_flow_check(cfg, out)
        if cfg.experiment == "contrast_h32":
            return _run_contrast(cfg, out)
        return _run_validate(cfg, out)
    except SimulationDiverged:
        raise


def _run_hitting(cfg, out):
    rows, all_records = [], []
    base = 0
    for radius in cfg.radii:
        solver = SolverConfig.from_dict({**cfg.solver.to_dict(), "radius": radius})
        sub = replace_solver(cfg, solver)
        records = run_ensemble(sub, stop_after_hit=True)
        for r in records:
            all_records.append((base + r.path_id, r))
        rows.append(hitting_row(radius, records, solver.horizon))
        base += cfg.n_paths
    summary = summarize([r for _, r in all_records], cfg)
    summary.extra["hitting_table"] = rows
    means = [row["mean_tau"] for row in rows]
    summary.checks.append(
        {
            "name": "mean_tau_nondecreasing_in_radius",
            "value": means,
            "bound": "nondecreasing",
            "passed": all(a <= b for a, b in zip(means, means[1:])),
        }
    )
    _write_paths_csv(out / "paths.csv", [r for _, r in all_records], ids=[i for i, _ in all_records])
    _write_json(out / "summary.json", summary.to_dict())
    code = 0 if summary.all_passed() else 1
    return code, [out / "paths.csv", out / "summary.json"]


def hitting_row(radius, records, horizon):
    """One table row: censored paths enter the mean at the horizon (a lower
    bound, never an imputation)."""
    taus = np.array([r.tau_r if r.tau_r is not None else horizon for r in records])
    censored = sum(1 for r in records if r.tau_r is None)
    stderr = float(taus.std(ddof=1) / np.sqrt(taus.size)) if taus.size > 1 else 0.0
    return {
        "radius": radius,
        "mean_tau": float(taus.mean()),
        "stderr": stderr,
        "n_censored": censored,
        "mean_is_lower_bound": censored > 0,
    }


def hitting_time_stats(summary):
    """The hitting table of a summary produced by the hitting experiment."""
    extra = summary.extra if hasattr(summary, "extra") else summary["extra"]
    return extra["hitting_table"]


def _xi_map(cfg):
    m = cfg.solver.grid_size
    if cfg.xi_kind == "identity":
        return AffineCircleMap.identity(m)
    if cfg.xi_kind == "rotation":
        return AffineCircleMap.rotation(cfg.xi_amplitude, m)
    return AffineCircleMap(CircleFunction.harmonic(m, 1, sin_amp=cfg.xi_amplitude))


def _run_flow_check(cfg, out):
    stream = NoiseStream(cfg.master_seed, 0, cfg.solver.mode_cutoff, cfg.solver.dt)
    xi = _xi_map(cfg)
    report = flow_compose_check(cfg.solver, stream, xi, record_every=cfg.record_every)
    tol = cfg.flow_tolerance
    if tol is None:
        tol = 1e-10 if cfg.xi_kind in ("identity", "rotation") else 1e-4
    checks = [
        {
            "name": f"flow_compose_sup_error_{cfg.xi_kind}",
            "value": report.sup_error,
            "bound": tol,
            "passed": report.sup_error <= tol,
        }
    ]
    summary = EnsembleSummary(1, [], [], {}, {}, float("nan"), checks=checks)
    summary.extra["flow_check"] = {
        "xi_kind": cfg.xi_kind,
        "xi_amplitude": cfg.xi_amplitude,
        "sup_error": report.sup_error,
        "n_checked": report.n_checked,
    }
    _write_sample_csv(out / "paths.csv", report.runs)
    _write_json(out / "summary.json", summary.to_dict())
    _write_json(out / "report.json", {"schema": SUMMARY_SCHEMA_VERSION, "checks": checks})
    return (0 if summary.all_passed() else 1), [
        out / "paths.csv",
        out / "summary.json",
        out / "report.json",
    ]


def contrast_h32(cfg, noise_scale=1.0, cutoffs=(32, 64), n_paths=None):
    """Cutoff-doubling stability of the final H^3 norm, strong vs slow decay.

    Runs matched ensembles (same seed, same per-mode draws thanks to the
    prefix-stable increment layout) at the two cutoffs for the rapidly
    decreasing exponential family and for the slow power-law family, and
    reports the mean per-path ratio of final H^3 norms plus the ensemble
    minimum of the warp derivative.  ``noise_scale=0`` is the sanity case:
    the state stays at zero and the ratio is 1 by convention.
    """
    n_paths = n_paths or cfg.n_paths
    base = cfg.solver
    grid = max(base.grid_size, 4 * max(cutoffs))
    if grid & (grid - 1):
        grid = 1 << (grid - 1).bit_length()
    results = {}
    for name, seq in (
        ("exponential", ScalingSequence.exponential(1.0)),
        ("powerlaw", ScalingSequence.powerlaw(1.5)),
    ):
        norms = {c: [] for c in cutoffs}
        min_derivs = []
        for pid in range(n_paths):
            for c in cutoffs:
                solver = SolverConfig(
                    dt=base.dt,
                    horizon=base.horizon,
                    mode_cutoff=c,
                    grid_size=grid,
                    alpha=seq,
                    radius=base.radius,
                    k=base.k,
                    scheme=base.scheme,
                )
                x = _final_state(solver, cfg.master_seed, pid, noise_scale)
                norms[c].append(x.hk_norm(3))
                if c == max(cutoffs):
                    min_derivs.append(1.0 + float(np.min(x.derivative().dense_values())))
        ratios = [
            _safe_ratio(hi, lo) for hi, lo in zip(norms[cutoffs[1]], norms[cutoffs[0]])
        ]
        results[name] = {
            "stability_ratio": float(np.mean(ratios)),
            "final_h3_low_cutoff": [float(v) for v in norms[cutoffs[0]]],
            "final_h3_high_cutoff": [float(v) for v in norms[cutoffs[1]]],
            "min_deriv": [float(v) for v in min_derivs],
        }
    return results


def _final_state(solver, seed, pid, noise_scale):
    stream = NoiseStream(seed, pid, solver.mode_cutoff, solver.dt)
    weights = solver.alpha.values(solver.mode_cutoff)
    state = FlowState.initial(solver)
    for _ in range(solver.n_steps):
        inc = stream.next_increment()
        if noise_scale != 1.0:
            inc = ModeIncrement(inc.delta_b * noise_scale, inc.mode_cutoff, inc.dt)
        state = euler_step(state, inc, solver, weights)
    return state.x


def _safe_ratio(num, den):
    if den == 0.0:
        return 1.0 if num == 0.0 else float("inf")
    return num / den


def _run_contrast(cfg, out):
    results = contrast_h32(cfg)
    checks = [
        {
            "name": "exponential_cutoff_doubling_stable",
            "value": results["exponential"]["stability_ratio"],
            "bound": 1.05,
            "passed": results["exponential"]["stability_ratio"] < 1.05,
        },
        {
            "name": "powerlaw_cutoff_doubling_unstable",
            "value": results["powerlaw"]["stability_ratio"],
            "bound": 1.20,
            "passed": results["powerlaw"]["stability_ratio"] > 1.20,
        },
    ]
    summary = EnsembleSummary(cfg.n_paths, [], [], {}, {}, float("nan"), checks=checks)
    summary.extra["contrast"] = results
    _write_json(out / "summary.json", summary.to_dict())
    return (0 if summary.all_passed() else 1), [out / "summary.json"]


# ---------------------------------------------------------------------------
# Validation battery
# ---------------------------------------------------------------------------


def validation_checks(seed=20240817):
    """Fast cross-module invariant battery; each entry is value vs tolerance."""
    rng = np.random.default_rng(seed)
    checks = []

    def record(name, value, bound, passed, kind="<="):
        checks.append(
            {"name": name, "value": value, "bound": bound, "kind": kind, "passed": bool(passed)}
        )

    m = 128
    theta = grid_points(m)

    def random_fn(n_modes=12, amp=1.0):
        a = np.zeros(m // 2 + 1)
        b = np.zeros(m // 2 + 1)
        a[: n_modes + 1] = rng.normal(0, amp, n_modes + 1) * np.exp(-0.3 * np.arange(n_modes + 1))
        b[1 : n_modes + 1] = rng.normal(0, amp, n_modes) * np.exp(-0.3 * np.arange(1, n_modes + 1))
        return CircleFunction.from_coefficients(a, b)

    # 1. Parseval: quadrature L2 vs coefficient L2
    worst = 0.0
    for _ in range(200):
        f = random_fn()
        quad = np.sqrt(np.mean(f.grid_values**2))
        coef = f.l2_norm()
        worst = max(worst, abs(quad - coef) / max(coef, 1e-300))
    record("parseval_quadrature_vs_coefficients", worst, 1e-10, worst <= 1e-10)

    # 2. Sobolev monotonicity (m >= 1; the two-term H^0 is sqrt(2) L2)
    worst = -np.inf
    for _ in range(200):
        f = random_fn()
        for lo, hi in ((1, 2), (2, 3), (1, 4)):
            worst = max(worst, f.hk_norm(lo) - f.hk_norm(hi))
    record("hk_monotone_in_k", worst, 1e-12, worst <= 1e-12)

    # 3. Embedding inequality with the computed constant
    c2 = sobolev_embedding_constant(2, 1)
    worst = -np.inf
    for _ in range(200):
        f = random_fn()
        worst = max(worst, f.derivative().linf_norm() / (c2 * f.hk_norm(2)))
    record("embedding_sup_f_prime_le_c2_h2", worst, 1.0, worst <= 1.0)

    # 4/5. Bell row sums: Stirling and Bell numbers
    bell_numbers = (1, 2, 5, 15, 52, 203, 877, 4140)
    ok = True
    for n in range(1, 9):
        total = sum(int(bell.bell_polynomial(n, k, np.ones(n - k + 1))) for k in range(n + 1))
        ok = ok and total == bell_numbers[n - 1]
    record("bell_row_sums_match_bell_numbers", int(ok), 1, ok, kind="==")
    s42 = bell.bell_polynomial(4, 2, np.ones(3))
    record("stirling_S42", s42, 7, s42 == 7, kind="==")

    # 6. Composition derivative: jet formula vs spectral pipeline.
    # Warp amplitude 0.2 keeps both aliasing and the n^order roundoff
    # amplification of the reference below the tolerance at this grid.
    worst = 0.0
    for _ in range(20):
        f = random_fn(n_modes=5, amp=1.0)
        g = random_fn(n_modes=3, amp=1.0)
        g = g * (0.2 / max(g.linf_norm(), 1e-9))
        warp = AffineCircleMap(g)
        composed = compose(f, warp)
        pts = theta[::16]
        gp = warp(pts)
        for order in (1, 2, 3, 4):
            deriv = composed.derivative(order)
            spectral = deriv.evaluate(pts)
            scale = max(1e-9, deriv.linf_norm())
            for idx, (p, w) in enumerate(zip(pts, gp)):
                f_jet = [f.derivative(i).evaluate([w])[0] for i in range(order + 1)]
                g_jet = [w, 1.0 + g.derivative().evaluate([p])[0]]
                g_jet += [g.derivative(i).evaluate([p])[0] for i in range(2, order + 1)]
                val = bell.compose_derivative(f_jet, g_jet, order)
                worst = max(worst, abs(val - spectral[idx]) / scale)
    record("faa_di_bruno_vs_spectral_composition", worst, 1e-8, worst <= 1e-8)

    # 7. Only the top term carries the highest derivative
    top = bell.BellTable(8)
    ok = all(top.monomials(n, 1) == ((1, tuple([0] * (n - 1) + [1])),) for n in range(2, 9))
    record("highest_derivative_term_unique", int(ok), 1, ok, kind="==")

    # 8/9. Hilbert-Schmidt certificate and its closed form at zero
    lam_basis = ScaledBasis(ScalingSequence.exponential(1.0), 16, 64)
    f = CircleFunction.harmonic(64, 1, sin_amp=0.1)
    rep = bell.hs_bound_certificate(f, 2, lam_basis)
    record("hs_certificate_below_bound", rep.actual, rep.bound, rep.holds)
    zero = CircleFunction.zero(64)
    rep0 = bell.hs_bound_certificate(zero, 2, lam_basis)
    closed = 1.0 + sum(
        np.exp(-2.0 * n) * (1 + n**4) for n in range(1, 17)
    )
    rel = abs(rep0.actual - closed) / closed
    record("hs_zero_state_closed_form", rel, 1e-10, rel <= 1e-10)

    # 10. Local Lipschitz certificate
    worst = 0.0
    for _ in range(10):
        f = random_fn(n_modes=5, amp=0.2)
        g = random_fn(n_modes=5, amp=0.2)
        f = f * min(1.0, 0.45 / max(f.hk_norm(2), 1e-12))
        g = g * min(1.0, 0.45 / max(g.hk_norm(2), 1e-12))
        rep = bell.lipschitz_certificate(f, g, 2, 0.5, lam_basis)
        worst = max(worst, 0.0 if rep.c_r == 0 else rep.ratio / rep.c_r)
    record("lipschitz_ratio_vs_constant", worst, 1.0, worst <= 1.0)

    # 11. Inclusion norms and trace identity
    pair = BasisPair(ScalingSequence.exponential(1.0))
    hs1 = inclusion_hs_norm(pair, 1)
    record("inclusion_hs_norm_n1", hs1, float(np.sqrt(3.0)), abs(hs1 - np.sqrt(3.0)) < 1e-14, kind="==")
    tr = q_lambda_trace(pair, 10)
    record("trace_equals_hs_squared", tr, inclusion_hs_norm(pair, 10) ** 2, tr == inclusion_hs_norm(pair, 10) ** 2, kind="==")

    # 12. Rapid decay classification
    ok = verify_rapid_decay(ScalingSequence.exponential(1.0), 6, 200) and not verify_rapid_decay(
        ScalingSequence.powerlaw(1.5), 2, 200
    )
    record("rapid_decay_classification", int(ok), 1, ok, kind="==")

    # 13. Stratonovich correction vanishes identically
    worst = 0.0
    basis = ScaledBasis(ScalingSequence.exponential(1.0), 16, 64)
    for _ in range(20):
        w = AffineCircleMap(CircleFunction(rng.normal(0, 0.3, 64)))
        worst = max(worst, float(np.max(np.abs(stratonovich_correction(w, basis)))))
    record("stratonovich_correction_zero", worst, 0.0, worst == 0.0, kind="==")

    # 14. Noise determinism
    s1 = NoiseStream(seed, 3, 8, 1e-3)
    s2 = NoiseStream(seed, 3, 8, 1e-3)
    same = np.array_equal(s1.next_increment().delta_b, s2.next_increment().delta_b)
    record("noise_replay_identical", int(same), 1, same, kind="==")

    # 15. Increment variance in a generous band
    s = NoiseStream(seed, 0, 4, 1e-3)
    draws = np.array([s.next_increment().delta_b for _ in range(4000)])
    var = float(draws.var())
    record("increment_variance_near_dt", var, [0.9e-3, 1.1e-3], 0.9e-3 <= var <= 1.1e-3, kind="in")

    # 16. Zero increment fixes the flow state; truncation boundary scale
    solver = SolverConfig(
        dt=1e-3, horizon=1e-3, mode_cutoff=8, grid_size=64,
        alpha=ScalingSequence.exponential(1.0), radius=0.5,
    )
    state = FlowState.initial(solver)
    zero_inc = ModeIncrement(np.zeros(17), 8, 1e-3)
    stepped = euler_step(state, zero_inc, solver)
    fixed = np.array_equal(stepped.x.grid_values, state.x.grid_values)
    boundary = truncation_scale(
        FlowState(CircleFunction.zero(64), 0.0, solver.radius, 1.0, False), solver
    )
    record("zero_increment_fixes_state", int(fixed), 1, fixed, kind="==")
    record("truncation_scale_at_boundary", boundary, 1.0, boundary == 1.0, kind="==")

    return checks


def _run_validate(cfg, out):
    checks = validation_checks(cfg.master_seed)
    report = {"schema": SUMMARY_SCHEMA_VERSION, "checks": checks}
    summary = EnsembleSummary(0, [], [], {}, {}, float("nan"), checks=checks)
    _write_sample_csv(out / "paths.csv", ())  # no paths; header only
    _write_json(out / "summary.json", summary.to_dict())
    _write_json(out / "report.json", report)
    return (0 if all(c["passed"] for c in checks) else 1), [
        out / "paths.csv",
        out / "summary.json",
        out / "report.json",
    ]


# ---------------------------------------------------------------------------
# Artifact writers
# ---------------------------------------------------------------------------


def _write_paths_csv(path, records, ids=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path_id", "t", "hk", "min_deriv", "stopped"])
        for idx, rec in enumerate(records):
            pid = ids[idx] if ids is not None else rec.path_id
            for s in rec.samples:
                writer.writerow([pid, repr(s.t), repr(s.hk), repr(s.min_deriv), int(s.stopped)])


def _write_sample_csv(path, runs):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path_id", "t", "hk", "min_deriv", "stopped"])
        for pid, samples in enumerate(runs):
            for s in samples:
                writer.writerow([pid, repr(s.t), repr(s.hk), repr(s.min_deriv), int(s.stopped)])


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    raise TypeError(f"not JSON serializable: {type(value)}")


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
