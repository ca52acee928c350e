import dataclasses

import numpy as np
import pytest

from circleflow import (
    AffineCircleMap,
    CircleFunction,
    FlowState,
    ModeIncrement,
    NoiseStream,
    ScaledBasis,
    ScalingSequence,
    SimulationDiverged,
    SolverConfig,
    concatenate,
    diffeo_radius,
    euler_step,
    flow_compose_check,
    grid_points,
    heun_step,
    simulate_path,
    sobolev_embedding_constant,
    stratonovich_correction,
    truncation_scale,
)
from conftest import random_band_limited

SEED = 20240817
ALPHA = ScalingSequence.exponential(1.0)


def make_config(**kw):
    base = dict(
        dt=1e-3, horizon=0.1, mode_cutoff=8, grid_size=64,
        alpha=ALPHA, radius=1.0, k=2, scheme="euler",
    )
    base.update(kw)
    return SolverConfig(**base)


def single_mode_increment(cfg, n, value):
    delta = np.zeros(2 * cfg.mode_cutoff + 1)
    delta[cfg.mode_cutoff + n] = value
    return ModeIncrement(delta, cfg.mode_cutoff, cfg.dt)


class TestSolverConfig:
    def test_rejects_inconsistent_settings(self):
        with pytest.raises(ValueError):
            make_config(grid_size=16)  # below 4N
        with pytest.raises(ValueError):
            make_config(dt=0.2)  # exceeds horizon
        with pytest.raises(ValueError):
            make_config(radius=0.0)
        with pytest.raises(ValueError):
            make_config(scheme="milstein")

    def test_zero_horizon_allowed(self):
        assert make_config(horizon=0.0).n_steps == 0

    def test_round_trips_through_dict(self):
        cfg = make_config()
        assert SolverConfig.from_dict(cfg.to_dict()) == cfg


class TestTruncationScale:
    def test_inside_ball(self):
        cfg = make_config(radius=1.0)
        state = FlowState(CircleFunction.zero(64), 0.0, 0.5, 1.0, False)
        assert truncation_scale(state, cfg) == 1.0

    def test_outside_ball(self):
        cfg = make_config(radius=1.0)
        state = FlowState(CircleFunction.zero(64), 0.0, 2.0, 1.0, True)
        assert truncation_scale(state, cfg) == 0.5

    def test_boundary_in_the_unit_branch(self):
        cfg = make_config(radius=1.0)
        state = FlowState(CircleFunction.zero(64), 0.0, 1.0, 1.0, False)
        assert truncation_scale(state, cfg) == 1.0


class TestSteps:
    def test_zero_increment_advances_time_only(self):
        cfg = make_config()
        state = FlowState.initial(cfg)
        nxt = euler_step(state, single_mode_increment(cfg, 0, 0.0), cfg)
        assert np.array_equal(nxt.x.grid_values, state.x.grid_values)
        assert nxt.t == pytest.approx(cfg.dt)

    def test_constant_mode_gives_rigid_rotation(self):
        cfg = make_config()
        state = FlowState.initial(cfg)
        nxt = euler_step(state, single_mode_increment(cfg, 0, 0.25), cfg)
        assert np.allclose(nxt.x.grid_values, 0.25 * ALPHA.value_at(0))
        assert nxt.min_deriv == pytest.approx(1.0, abs=1e-12)

    def test_first_cosine_mode_from_identity(self):
        cfg = make_config()
        state = FlowState.initial(cfg)
        nxt = euler_step(state, single_mode_increment(cfg, 1, 0.5), cfg)
        expected = 0.5 * ALPHA.value_at(1) * np.cos(grid_points(64))
        assert np.max(np.abs(nxt.x.grid_values - expected)) < 1e-15

    def test_heun_zero_increment(self):
        cfg = make_config(scheme="heun")
        state = FlowState.initial(cfg)
        nxt = heun_step(state, single_mode_increment(cfg, 0, 0.0), cfg)
        assert np.array_equal(nxt.x.grid_values, state.x.grid_values)

    def test_heun_equals_euler_for_additive_mode(self):
        # the constant mode is state independent, so the corrector changes nothing
        cfg = make_config()
        state = FlowState.initial(cfg)
        inc = single_mode_increment(cfg, 0, 0.3)
        assert np.array_equal(
            heun_step(state, inc, cfg).x.grid_values,
            euler_step(state, inc, cfg).x.grid_values,
        )

    def test_non_finite_increment_aborts(self):
        cfg = make_config()
        state = FlowState.initial(cfg)
        bad = single_mode_increment(cfg, 1, np.nan)
        with pytest.raises(SimulationDiverged):
            euler_step(state, bad, cfg)
        with pytest.raises(SimulationDiverged):
            heun_step(state, bad, cfg)


class TestSimulatePath:
    def test_zero_horizon_records_initial_state_only(self):
        cfg = make_config(horizon=0.0)
        rec = simulate_path(cfg, NoiseStream(SEED, 0, 8, cfg.dt))
        assert len(rec.samples) == 1
        s = rec.samples[0]
        assert (s.t, s.hk, s.min_deriv, s.stopped) == (0.0, 0.0, 1.0, False)
        assert rec.tau_r is None

    def test_large_radius_never_crosses(self):
        cfg = make_config(horizon=0.5, mode_cutoff=16, grid_size=64, radius=50.0)
        rec = simulate_path(cfg, NoiseStream(SEED, 0, 16, cfg.dt), record_every=50)
        assert rec.tau_r is None
        assert not any(s.stopped for s in rec.samples)

    def test_replay_is_bit_identical(self):
        cfg = make_config(horizon=0.2, radius=0.3)
        rec1 = simulate_path(cfg, NoiseStream(SEED, 5, 8, cfg.dt), record_every=7)
        rec2 = simulate_path(cfg, NoiseStream(SEED, 5, 8, cfg.dt), record_every=7)
        for a, b in zip(rec1.samples, rec2.samples):
            assert (a.t, a.hk, a.min_deriv, a.stopped) == (b.t, b.hk, b.min_deriv, b.stopped)
        assert np.array_equal(rec1.final_state.grid_values, rec2.final_state.grid_values)

    def test_hitting_time_first_crossing(self):
        cfg = make_config(horizon=0.5, radius=0.05)
        rec = simulate_path(cfg, NoiseStream(SEED, 2, 8, cfg.dt), record_every=1)
        assert rec.tau_r is not None
        t, hk, _, stopped = rec.series()
        first = np.argmax(hk >= cfg.radius)
        assert t[first] == pytest.approx(rec.tau_r)
        assert np.all(hk[:first] < cfg.radius)
        assert np.all(stopped[first:])
        assert rec.state_at_tau is not None
        assert rec.state_at_tau.hk_norm(cfg.k) >= cfg.radius

    def test_continues_past_hit_under_truncated_dynamics(self):
        cfg = make_config(horizon=0.2, radius=0.05)
        rec = simulate_path(cfg, NoiseStream(SEED, 2, 8, cfg.dt), record_every=1)
        assert rec.samples[-1].t == pytest.approx(0.2)

    def test_stop_after_hit_truncates_record(self):
        cfg = make_config(horizon=0.5, radius=0.05)
        rec = simulate_path(cfg, NoiseStream(SEED, 2, 8, cfg.dt), stop_after_hit=True)
        assert rec.samples[-1].t == pytest.approx(rec.tau_r)

    def test_samples_strictly_increasing(self):
        cfg = make_config(horizon=0.2, radius=0.08)
        rec = simulate_path(cfg, NoiseStream(SEED, 3, 8, cfg.dt), record_every=13)
        t = rec.series()[0]
        assert np.all(np.diff(t) > 0)


class _ZeroStream:
    """Stand-in noise source that always returns zero increments."""

    def __init__(self, cutoff, dt):
        self.cutoff, self.dt = cutoff, dt

    def next_increment(self):
        return ModeIncrement(np.zeros(2 * self.cutoff + 1), self.cutoff, self.dt)


class TestConcatenate:
    def _stopped_record(self, cfg):
        return simulate_path(
            cfg, NoiseStream(SEED, 1, cfg.mode_cutoff, cfg.dt), record_every=1
        )

    def test_zero_continuation_is_constant_at_xi(self):
        cfg = make_config(horizon=0.3, radius=0.05)
        first = self._stopped_record(cfg)
        out = concatenate(first, _ZeroStream(8, cfg.dt), cfg, record_every=10, keep_snapshots=True)
        xi = first.state_at_tau
        for s in out.samples:
            if s.t > first.tau_r and s.x is not None:
                assert np.max(np.abs(s.x.grid_values - xi.grid_values)) < 1e-14
                assert s.hk == pytest.approx(xi.hk_norm(cfg.k))

    def test_requires_hitting_time(self):
        cfg = make_config(horizon=0.05, radius=100.0)
        rec = simulate_path(cfg, NoiseStream(SEED, 0, 8, cfg.dt))
        with pytest.raises(ValueError):
            concatenate(rec, _ZeroStream(8, cfg.dt), cfg)

    def test_requires_diffeomorphism_at_xi(self):
        cfg = make_config(horizon=0.3, radius=0.05)
        first = self._stopped_record(cfg)
        steep = CircleFunction.harmonic(64, 1, sin_amp=1.5)
        broken = dataclasses.replace(first, state_at_tau=steep)
        with pytest.raises(ValueError):
            concatenate(broken, _ZeroStream(8, cfg.dt), cfg)

    def test_matches_direct_continuation(self):
        # same master increments after the crossing: interpolation error only
        cfg_free = make_config(horizon=0.2, mode_cutoff=8, grid_size=256, radius=1e9)
        direct = simulate_path(
            cfg_free, NoiseStream(SEED, 1, 8, cfg_free.dt), record_every=1, keep_snapshots=True
        )
        cfg_hit = make_config(horizon=0.2, mode_cutoff=8, grid_size=256, radius=0.08)
        first = simulate_path(
            cfg_hit, NoiseStream(SEED, 1, 8, cfg_hit.dt), record_every=1, stop_after_hit=True
        )
        k0 = int(round(first.tau_r / cfg_hit.dt))
        fresh = NoiseStream(SEED, 1, 8, cfg_hit.dt, step_index=k0)
        out = concatenate(first, fresh, cfg_free, record_every=1, keep_snapshots=True)
        direct_map = {round(s.t, 9): s.x for s in direct.samples if s.x is not None}
        checked = 0
        for s in out.samples:
            if s.x is None or s.t <= first.tau_r:
                continue
            ref = direct_map.get(round(s.t, 9))
            if ref is not None:
                assert np.max(np.abs(s.x.grid_values - ref.grid_values)) < 1e-4
                checked += 1
        assert checked > 100


class TestFlowComposeCheck:
    def test_identity_initial_map(self):
        cfg = make_config(horizon=0.05, mode_cutoff=8, grid_size=256, radius=10.0)
        rep = flow_compose_check(cfg, NoiseStream(SEED, 0, 8, cfg.dt), AffineCircleMap.identity(256))
        assert rep.sup_error <= 1e-12

    def test_rotation_initial_map(self):
        cfg = make_config(horizon=0.1, mode_cutoff=8, grid_size=256, radius=10.0)
        rep = flow_compose_check(
            cfg, NoiseStream(SEED, 0, 8, cfg.dt), AffineCircleMap.rotation(np.pi, 256)
        )
        assert rep.sup_error <= 1e-10

    def test_grid_mismatch_rejected(self):
        cfg = make_config()
        with pytest.raises(ValueError):
            flow_compose_check(cfg, NoiseStream(SEED, 0, 8, cfg.dt), AffineCircleMap.identity(128))


class TestDiffeoRadius:
    def test_value_and_edge(self):
        r = diffeo_radius(2)
        assert 0.0 < r < 1.0
        assert r == pytest.approx(1.0 / sobolev_embedding_constant(2, 1), rel=1e-14)
        with pytest.raises(ValueError):
            diffeo_radius(1)

    def test_certifies_random_states(self, rng):
        r_star = diffeo_radius(2)
        for _ in range(1000):
            f = random_band_limited(rng, 64, 8)
            f = f * (rng.uniform(0.0, 0.999) * r_star / max(f.hk_norm(2), 1e-12))
            warp = AffineCircleMap(f)
            assert warp.min_derivative > 0.0

    def test_near_boundary_bump_certified(self, rng):
        r_star = diffeo_radius(2)
        f = random_band_limited(rng, 64, 6)
        f = f * (0.99 * r_star / f.hk_norm(2))
        assert AffineCircleMap(f).min_derivative > 0.0


class TestStratonovichCorrection:
    def test_identically_zero_for_random_states(self, rng):
        basis = ScaledBasis(ALPHA, 16, 64)
        for _ in range(50):
            warp = AffineCircleMap(CircleFunction(rng.normal(0, 0.5, 64)))
            correction = stratonovich_correction(warp, basis)
            assert np.all(correction == 0.0)
