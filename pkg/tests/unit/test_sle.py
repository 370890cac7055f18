"""
Tests for Loewner stepping, traces, random streams and the Monte Carlo harness.
"""

import numpy as np
import pytest
import sympy as sp
from pydantic import ValidationError

from cosetsle.algebra import builtin_algebra, make_field, su2_irrep, su2_u1_embedding
from cosetsle.errors import IndicialRelationError, PathDomainError, UnsupportedModelError
from cosetsle.sle import (
    GroupWalkObservable,
    LoewnerState,
    PowerObservable,
    SimConfig,
    TracePath,
    complement_action,
    coset_onepoint_martingale_mc,
    driving_recovery,
    full_action,
    group_factor_step,
    group_walk_expectation,
    group_walk_oracle,
    indicial_exponents,
    indicial_residual,
    loewner_step,
    mc_harness,
    power_martingale_mc,
    read_trace_csv,
    run_streams,
    stream_generator,
    trace_from_driving,
    trace_generate,
    write_trace_csv,
)
from cosetsle.sle.rng import stream_key
from cosetsle.solver import ConstraintRow, ConstraintSystem, solve_constraints


def doublet_action():
    """su(2)/u(1) complement acting on the doublet."""
    return complement_action(su2_u1_embedding(), su2_irrep(1))


def fixed_point(kappa, tau):
    """Solver result pinned at (kappa, tau)."""
    rows = [
        ConstraintRow(a=sp.Integer(1), b=sp.Integer(0), d=-sp.nsimplify(kappa), tag="kappa"),
        ConstraintRow(a=sp.Integer(0), b=sp.Integer(1), d=-sp.nsimplify(tau), tag="tau"),
    ]
    return solve_constraints(ConstraintSystem(rows=rows))


class TestSimConfig:
    """Tests for SimConfig validation."""

    def test_defaults(self):
        """Test default checkpoints split [0, T] evenly."""
        config = SimConfig(kappa=2.0)
        assert config.steps == 500
        assert config.checkpoint_steps() == [100, 200, 300, 400, 500]

    def test_dt_exceeds_horizon(self):
        """Test dt > T is rejected."""
        with pytest.raises(ValidationError):
            SimConfig(kappa=2.0, dt=1.0, T=0.5)

    def test_negative_kappa(self):
        """Test kappa must be non-negative."""
        with pytest.raises(ValidationError):
            SimConfig(kappa=-1.0)

    def test_start_in_upper_half_plane(self):
        """Test the tracked point must have positive imaginary part."""
        with pytest.raises(ValidationError):
            SimConfig(kappa=2.0, start=(1.0, 0.0))

    def test_seed_masked(self):
        """Test seeds reduce to 64 bits."""
        assert SimConfig(kappa=2.0, seed=-1).seed == (1 << 64) - 1

    def test_frozen(self):
        """Test configs are immutable."""
        config = SimConfig(kappa=2.0)
        with pytest.raises(ValidationError):
            config.kappa = 3.0


class TestStreams:
    """Tests for counter-based random streams."""

    def test_key_layout(self):
        """Test the stream index sits above the seed."""
        assert stream_key(1, 2) == (2 << 64) | 1

    def test_reproducible(self):
        """Test the same (seed, stream) gives the same draws."""
        a = stream_generator(42, 3).standard_normal(10)
        b = stream_generator(42, 3).standard_normal(10)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        """Test different streams and seeds give different draws."""
        base = stream_generator(42, 0).standard_normal(10)
        assert not np.array_equal(base, stream_generator(42, 1).standard_normal(10))
        assert not np.array_equal(base, stream_generator(43, 0).standard_normal(10))

    def test_negative_stream(self):
        """Test negative stream indices are rejected."""
        with pytest.raises(ValueError):
            stream_key(0, -1)

    def test_batch_does_not_change_results(self):
        """Test run_streams is independent of the batch size."""
        small = SimConfig(kappa=2.0, dt=0.01, T=0.1, samples=20, batch=7)
        large = small.model_copy(update={"batch": 256})
        h, p = 0.5, indicial_exponents(2.0, 0.5)[0]
        a, _ = run_streams(small, PowerObservable(small, h, p))
        b, _ = run_streams(large, PowerObservable(large, h, p))
        assert a.shape == (20, 5, 1)
        np.testing.assert_allclose(a, b, rtol=1e-12)


class TestLoewnerStep:
    """Tests for single-point Loewner steps."""

    def test_slit_exact_without_driving(self):
        """Test zero driving gives g_t(z) = sqrt(z^2 + 4t) exactly."""
        z = 1.0 + 1.0j
        state = LoewnerState.start([z])
        dt = 1e-3
        for _ in range(100):
            state = loewner_step(state, 0.0, dt, scheme="slit")
        root = np.sqrt(z * z + 4 * state.t)
        assert abs(state.points[0] - root) < 1e-12
        assert abs(np.exp(state.dlogw[0]) - z / root) < 1e-12

    def test_euler_converges(self):
        """Test the Euler error shrinks with dt."""
        z = 1.0 + 1.0j
        exact = np.sqrt(z * z + 4 * 0.1)
        errors = []
        for dt in (1e-2, 5e-3):
            state = LoewnerState.start([z])
            for _ in range(int(round(0.1 / dt))):
                state = loewner_step(state, 0.0, dt)
            errors.append(abs(state.points[0] - exact))
        assert 0 < errors[1] < 0.75 * errors[0]
        assert errors[0] < 1e-2

    @pytest.mark.parametrize("dt", [1e-3, 1e-4])
    def test_euler_on_imaginary_axis(self, dt):
        """Test Euler from z = i tracks g_t(i) = i sqrt(1 - 4t) to within a multiple of dt."""
        horizon = 0.1
        state = LoewnerState.start([1j])
        for _ in range(int(round(horizon / dt))):
            state = loewner_step(state, 0.0, dt)
        assert not state.swallowed[0]
        assert abs(state.points[0] - 1j * np.sqrt(1 - 4 * horizon)) < 2 * dt
        assert abs(np.exp(state.dlogw[0]) - 1 / np.sqrt(1 - 4 * horizon)) < 5 * dt

    def test_driving_shifts_points(self):
        """Test a driving increment shifts w by -dU."""
        state = loewner_step(LoewnerState.start([2.0j]), 0.25, 1e-3, scheme="slit")
        assert state.U == 0.25
        assert abs(state.points[0] - (np.sqrt(complex(-4.0 + 4e-3)) - 0.25)) < 1e-12

    def test_swallowed_point_frozen(self):
        """Test a point driven onto the tip is flagged and then left alone."""
        state = loewner_step(LoewnerState.start([0.5 + 0.001j]), 0.5, 1e-4, scheme="slit")
        assert state.swallowed[0]
        frozen = loewner_step(state, 0.1, 1e-4, scheme="slit")
        assert frozen.points[0] == state.points[0]
        assert frozen.dlogw[0] == state.dlogw[0]

    def test_nonpositive_dt(self):
        """Test dt <= 0 is rejected."""
        with pytest.raises(ValueError):
            loewner_step(LoewnerState.start([1j]), 0.0, 0.0)

    def test_lower_half_plane_rejected(self):
        """Test tracked points must start in the upper half-plane."""
        with pytest.raises(ValidationError):
            LoewnerState.start([1.0 - 1.0j])


class TestTrace:
    """Tests for trace generation and unzipping."""

    def test_vertical_slit(self):
        """Test zero driving gives the tip 2i sqrt(t)."""
        path = trace_from_driving(np.zeros(11), 0.01)
        np.testing.assert_allclose(path.tips, 2j * np.sqrt(path.t), atol=1e-12)

    def test_generated_shape(self):
        """Test one tip per step, starting at the origin in the closed upper half-plane."""
        path = trace_generate(SimConfig(kappa=2.0, dt=1e-3, T=0.1))
        assert len(path.tips) == 101
        assert path.tips[0] == 0
        assert np.all(path.tips.imag >= 0)

    def test_generation_reproducible(self):
        """Test the same seed gives the same trace."""
        config = SimConfig(kappa=4.0, dt=1e-3, T=0.05, seed=9)
        np.testing.assert_array_equal(trace_generate(config).tips, trace_generate(config).tips)

    @pytest.mark.parametrize("kappa", [0.0, 2.0, 6.0])
    def test_driving_recovery(self, kappa):
        """Test unzipping a generated trace returns its driving function."""
        path = trace_generate(SimConfig(kappa=kappa, dt=1e-3, T=0.1, seed=5))
        recovered = driving_recovery(path)
        assert recovered[0] == 0
        np.testing.assert_allclose(recovered, path.driving, atol=1e-7)

    def test_recovery_rejects_lower_half_plane(self):
        """Test a path dipping below the real axis raises PathDomainError."""
        path = TracePath(t=np.array([0.0, 0.1, 0.2]), driving=np.zeros(3), tips=np.array([0, 0.5 - 0.1j, 1j]))
        with pytest.raises(PathDomainError):
            driving_recovery(path)

    def test_sample_keeps_endpoints(self):
        """Test subsampling keeps the first and last tips."""
        path = trace_from_driving(np.zeros(101), 0.001)
        sampled = path.sample(11)
        assert len(sampled.t) == 11
        assert sampled.tips[0] == path.tips[0]
        assert sampled.tips[-1] == path.tips[-1]

    def test_csv(self, tmp_path):
        """Test the CSV header and contents."""
        path = trace_from_driving(np.zeros(6), 0.01)
        target = write_trace_csv(path, tmp_path / "trace.csv")
        assert target.read_text().splitlines()[0] == "t,re,im"
        back = read_trace_csv(target)
        np.testing.assert_allclose(back.tips, path.tips)
        np.testing.assert_allclose(back.t, path.t)


class TestIndicial:
    """Tests for the power-martingale exponents."""

    def test_kappa_three(self):
        """Test kappa = 3, h = 1/2 gives p = 2/3 and -1."""
        roots = indicial_exponents(3.0, 0.5)
        assert roots == pytest.approx((2 / 3, -1.0))

    def test_roots_solve_relation(self):
        """Test every root has zero residual."""
        for p in indicial_exponents(6.0, 0.3, tau_casimir=0.5):
            assert abs(indicial_residual(6.0, 0.3, p, tau_casimir=0.5)) < 1e-12

    def test_linear_at_kappa_zero(self):
        """Test kappa = 0 gives p = h."""
        assert indicial_exponents(0.0, 0.7) == pytest.approx((0.7,))

    def test_complex_roots(self):
        """Test no real exponent gives an empty tuple."""
        assert indicial_exponents(4.0, -1.0) == ()

    def test_wrong_exponent_rejected(self):
        """Test kappa = 4, h = 1/2, p = 2/3 is not a martingale."""
        config = SimConfig(kappa=4.0, dt=0.01, T=0.1, samples=10)
        with pytest.raises(IndicialRelationError):
            power_martingale_mc(config, 0.5, 0.6666666667)

    def test_force(self):
        """Test force skips the indicial check."""
        PowerObservable(SimConfig(kappa=4.0), 0.5, 0.6666666667, force=True).check()


class TestHarness:
    """Tests for the Monte Carlo harness."""

    def test_deterministic_martingale(self):
        """Test (g')^h w^h is constant without driving, so every checkpoint passes exactly."""
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=128, scheme="slit")
        report = power_martingale_mc(config, 0.7, 0.7)
        assert report.verdict == "pass"
        assert report.samples == 128
        assert len(report.checkpoints) == 5
        assert all(c.stderr == 0 and c.z == 0 for c in report.checkpoints)

    def test_euler_run_at_i(self):
        """Test an Euler run from z = i keeps (g')^h w^h within a multiple of dt of i^h."""
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=4, start=(0.0, 1.0))
        records, swallowed = run_streams(config, PowerObservable(config, 0.5, 0.5))
        assert swallowed == 0
        values = records[:, :, 0]
        assert values.shape == (4, 5)
        assert np.all(np.abs(values - 1j**0.5) < 5 * config.dt)

    def test_initial_value(self):
        """Test M_0 = z^p for the power observable."""
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=128, scheme="slit")
        report = power_martingale_mc(config, 0.7, 0.7)
        m0 = (1 + 1j) ** 0.7
        assert report.M0 == pytest.approx(m0.real)
        assert report.M0_im == pytest.approx(m0.imag)

    def test_insufficient_samples(self):
        """Test fewer than 100 streams give no verdict."""
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=10, scheme="slit")
        assert power_martingale_mc(config, 0.7, 0.7).verdict == "insufficient samples"

    def test_report_echoes_parameters(self):
        """Test the report carries seed, dt and the exponents."""
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=10, seed=17, scheme="slit")
        report = power_martingale_mc(config, 0.7, 0.7)
        assert report.seed == 17
        assert report.dt == 1e-3
        assert report.parameters == {"h": 0.7, "p": 0.7}

    @pytest.mark.slow
    def test_stderr_scaling(self):
        """Test quadrupling the streams halves the standard error."""
        base = SimConfig(kappa=3.0, dt=0.01, T=0.1, samples=400, scheme="slit")
        small = mc_harness(base, PowerObservable(base, 0.5, 2 / 3))
        big_config = base.model_copy(update={"samples": 1600})
        big = mc_harness(big_config, PowerObservable(big_config, 0.5, 2 / 3))
        ratio = small.checkpoints[-1].stderr / big.checkpoints[-1].stderr
        assert 1.6 < ratio < 2.5


class TestGroupWalk:
    """Tests for the group factor."""

    def test_complement_casimir(self):
        """Test the complement Casimir is the identity on the doublet."""
        np.testing.assert_allclose(doublet_action().casimir, np.eye(2), atol=1e-12)

    def test_full_casimir(self):
        """Test the full su(2) Casimir is 3/2 on the doublet."""
        action = full_action(builtin_algebra("su2"), su2_irrep(1))
        assert action.directions == 3
        np.testing.assert_allclose(action.casimir, 1.5 * np.eye(2), atol=1e-12)

    def test_oracle(self):
        """Test exp((tau/2) Q t) v0 on the doublet."""
        oracle = group_walk_oracle(doublet_action(), np.array([1.0, 0.0]), 1.0, 2.0)
        np.testing.assert_allclose(oracle, [np.e, 0.0], atol=1e-12)

    def test_drift_only_step(self):
        """Test a zero Brownian increment applies the Ito drift."""
        config = SimConfig(kappa=2.0, tau=1.0, dt=0.01, T=0.1)
        state = LoewnerState.start([1j], repvec=np.array([1.0, 0.0]))
        stepped = group_factor_step(state, config, np.zeros(2), doublet_action(), coupling=False)
        np.testing.assert_allclose(stepped.repvec, [1.005, 0.0])

    def test_step_without_vector(self):
        """Test stepping a state without a vector raises."""
        config = SimConfig(kappa=2.0, tau=1.0)
        with pytest.raises(ValueError):
            group_factor_step(LoewnerState.start([1j]), config, np.zeros(2), doublet_action())

    def test_zero_tau_is_static(self):
        """Test tau = 0 leaves the walk at v0."""
        config = SimConfig(kappa=0.0, tau=0.0, dt=0.01, T=0.1, samples=50)
        estimate = group_walk_expectation(config, doublet_action(), np.array([1.0, 0.0]))
        assert estimate.relative_error == 0
        assert estimate.mean == [(1.0, 0.0), (0.0, 0.0)]

    def test_observable_initial_value(self):
        """Test the undone walk starts at v0[index]."""
        config = SimConfig(kappa=0.0, tau=1.0)
        observable = GroupWalkObservable(config, doublet_action(), np.array([0.0, 1.0]), index=1)
        assert observable.initial_value() == 1.0

    @pytest.mark.slow
    def test_expectation_matches_oracle(self):
        """Test the Monte Carlo mean of v_T agrees with the matrix exponential."""
        config = SimConfig(kappa=0.0, tau=1.0, dt=0.01, T=0.5, samples=4000)
        estimate = group_walk_expectation(config, doublet_action(), np.array([1.0, 0.0]))
        assert estimate.relative_error < 0.05


class TestCosetOnePoint:
    """Tests for the coset one-point harness."""

    def test_no_real_exponent(self):
        """Test a large tau Casimir term leaves no power ansatz."""
        embedding = su2_u1_embedding()
        field = make_field(embedding, 2, 2, 0)
        config = SimConfig(kappa=3.0, dt=0.01, T=0.1, samples=10)
        report = coset_onepoint_martingale_mc(config, field, embedding, fixed_point(3, 1))
        assert report.verdict == "no power ansatz"
        assert report.samples == 0
        assert report.parameters["casimir"] == pytest.approx(4.0)

    def test_inconsistent_result(self):
        """Test an inconsistent solver result has nothing to simulate."""
        embedding = su2_u1_embedding()
        field = make_field(embedding, 2, 2, 0)
        inconsistent = solve_constraints(
            ConstraintSystem(
                rows=[
                    ConstraintRow(a=sp.Integer(1), b=sp.Integer(0), d=sp.Integer(-1), tag="x"),
                    ConstraintRow(a=sp.Integer(1), b=sp.Integer(0), d=sp.Integer(-2), tag="y"),
                ]
            )
        )
        with pytest.raises(UnsupportedModelError):
            coset_onepoint_martingale_mc(SimConfig(kappa=3.0), field, embedding, inconsistent)

    def test_deterministic_at_kappa_zero(self):
        """Test kappa = 0, tau = 0 reduces to the constant (g')^h w^h."""
        embedding = su2_u1_embedding()
        field = make_field(embedding, 2, 2, 0)
        config = SimConfig(kappa=0.0, dt=1e-3, T=0.1, samples=128, scheme="slit")
        report = coset_onepoint_martingale_mc(config, field, embedding, fixed_point(0, 0))
        assert report.parameters["p"] == pytest.approx(0.5)
        assert report.verdict == "pass"
