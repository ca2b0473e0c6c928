"""Shannon/Bayesian surprise values, flags, and calibration."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surprise_bo.errors import CalibrationError, DomainError
from surprise_bo.gp import Hyperparams, build_model, condition_on
from surprise_bo.surprise import (
    BAYESIAN,
    SHANNON,
    SurpriseConfig,
    bayesian_surprise,
    calibrate,
    gaussian_kl,
    loo_calibration_kls,
    reference_grid,
    shannon_surprise,
)

from oracles import gaussian_kl_reference


CFG = SurpriseConfig()


class TestShannonSurprise:
    def test_at_the_mean(self):
        v = shannon_surprise(0.5, 0.5, 2.0, CFG)
        assert v.value == pytest.approx(0.5 * math.log(2 * math.pi * 4.0))
        assert not v.flagged
        assert v.kind == SHANNON

    def test_exactly_on_the_band_edge(self):
        v = shannon_surprise(1.96, 0.0, 1.0, CFG)
        assert not v.flagged
        assert v.interval == (-1.96, 1.96)

    def test_hand_value(self):
        v = shannon_surprise(3.0, 0.0, 1.0, CFG)
        assert v.value == pytest.approx(0.5 * math.log(2 * math.pi) + 4.5)
        assert v.value == pytest.approx(5.4189, abs=5e-5)
        assert v.flagged

    def test_nonpositive_sigma(self):
        for s in (0.0, -1.0):
            with pytest.raises(DomainError):
                shannon_surprise(0.0, 0.0, s, CFG)

    def test_flag_iff_value_exceeds_threshold(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            y = float(rng.normal(scale=3))
            mu = float(rng.normal())
            sigma = float(rng.uniform(0.1, 2))
            v = shannon_surprise(y, mu, sigma, CFG)
            assert v.flagged == (v.value > v.threshold)
            assert v.flagged == (abs(y - mu) > 1.96 * sigma)

    @given(
        st.floats(-10, 10),
        st.floats(0.1, 5),
        st.floats(0, 5),
        st.floats(0.01, 4),
    )
    @settings(max_examples=100, deadline=None)
    def test_increasing_in_deviation(self, mu, sigma, dev, extra):
        near = shannon_surprise(mu + dev, mu, sigma, CFG)
        far = shannon_surprise(mu + dev + extra, mu, sigma, CFG)
        if extra > 0:
            assert far.value > near.value

    @given(st.floats(-5, 5), st.floats(0.1, 3), st.floats(0.1, 100))
    @settings(max_examples=100, deadline=None)
    def test_flag_invariant_under_rescaling(self, dev, sigma, scale):
        base = shannon_surprise(dev, 0.0, sigma, CFG)
        scaled = shannon_surprise(dev * scale, 0.0, sigma * scale, CFG)
        assert base.flagged == scaled.flagged


class TestGaussianKl:
    def test_identity(self):
        assert gaussian_kl((0.7, 2.0), (0.7, 2.0)) == 0.0

    def test_mean_shift(self):
        assert gaussian_kl((0.0, 1.0), (1.0, 1.0)) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_variance_ratio(self):
        want = math.log(2.0) + 1.0 / 8.0 - 0.5
        assert gaussian_kl((0.0, 1.0), (0.0, 4.0)) == pytest.approx(
            want, abs=1e-12
        )
        assert want == pytest.approx(0.3181, abs=5e-5)

    def test_asymmetry(self):
        p, q = (0.0, 1.0), (0.0, 4.0)
        assert gaussian_kl(p, q) != gaussian_kl(q, p)

    def test_bad_variance(self):
        with pytest.raises(DomainError):
            gaussian_kl((0.0, 0.0), (0.0, 1.0))
        with pytest.raises(DomainError):
            gaussian_kl((0.0, 1.0), (0.0, -2.0))

    @given(
        st.floats(-10, 10),
        st.floats(1e-3, 10),
        st.floats(-10, 10),
        st.floats(1e-3, 10),
    )
    @settings(max_examples=200, deadline=None)
    def test_nonnegative_and_matches_reference(self, mp, vp, mq, vq):
        kl = gaussian_kl((mp, vp), (mq, vq))
        assert kl >= -1e-12
        assert kl == pytest.approx(
            gaussian_kl_reference(mp, vp, mq, vq), rel=1e-10, abs=1e-12
        )


class TestReferenceGrid:
    def test_shape_and_bounds(self):
        bounds = np.array([[-2.0, 2.0], [0.0, 1.0], [5.0, 5.0]])
        grid = reference_grid(bounds, 64, seed=3)
        assert grid.shape == (64, 3)
        assert (grid[:, 0] >= -2).all() and (grid[:, 0] <= 2).all()
        np.testing.assert_allclose(grid[:, 2], 5.0)

    def test_deterministic(self):
        bounds = np.array([[-1.0, 1.0]] * 6)
        np.testing.assert_array_equal(
            reference_grid(bounds, 32, seed=9), reference_grid(bounds, 32, seed=9)
        )

    def test_latin_stratification(self):
        bounds = np.array([[0.0, 1.0], [0.0, 1.0]])
        grid = reference_grid(bounds, 16, seed=1)
        for d in range(2):
            bins = np.floor(grid[:, d] * 16).astype(int)
            assert sorted(bins) == list(range(16))


def fitted_pair(seed=0, y_offset=0.0):
    """A 1-D model and the same model conditioned on one extra point."""
    rng = np.random.default_rng(seed)
    X = np.linspace(-2, 2, 12)[:, None]
    y = np.sin(X).ravel() + rng.normal(scale=0.05, size=12)
    hyper = Hyperparams(0.8, 1.0, 0.01)
    before = build_model(X, y, hyper)
    x_new = np.array([0.3])
    mu = float(
        (before.alpha @ np.exp(-((X.ravel() - 0.3) ** 2) / (2 * 0.8**2)))
        + before.mean
    )
    after = condition_on(before, x_new, mu + y_offset)
    return before, after


class TestBayesianSurprise:
    GRID = reference_grid(np.array([[-2.0, 2.0]]), 32, seed=7)

    def cfg(self, threshold_mean=0.0, std=1.0):
        cal = calibrate([threshold_mean] * 4 + [threshold_mean + std], 2.0)
        return SurpriseConfig(calibration=cal)

    def test_identical_models_zero(self):
        before, _ = fitted_pair(seed=1)
        v = bayesian_surprise(before, before, self.GRID, self.cfg())
        assert v.value == 0.0
        assert v.kind == BAYESIAN
        assert v.interval is None

    def test_large_deviation_moves_belief_more(self):
        _, after_small = fitted_pair(seed=2, y_offset=0.0)
        before, after_big = fitted_pair(seed=2, y_offset=1.5)
        small = bayesian_surprise(before, after_small, self.GRID, self.cfg())
        big = bayesian_surprise(before, after_big, self.GRID, self.cfg())
        assert small.value < big.value

    def test_single_point_grid_reduces_to_scalar_kl(self):
        before, after = fitted_pair(seed=3, y_offset=1.0)
        point = np.array([[0.25]])
        v = bayesian_surprise(before, after, point, self.cfg())
        from surprise_bo.gp import predict

        pb = predict(before, point)
        pa = predict(after, point)
        noise = before.hyper.noise_variance
        want = gaussian_kl(
            (float(pb.mean[0]), float(pb.variance[0]) + noise),
            (float(pa.mean[0]), float(pa.variance[0]) + noise),
        )
        assert v.value == pytest.approx(want, rel=1e-12)

    def test_grid_order_invariance(self):
        before, after = fitted_pair(seed=4, y_offset=0.8)
        v1 = bayesian_surprise(before, after, self.GRID, self.cfg())
        v2 = bayesian_surprise(before, after, self.GRID[::-1], self.cfg())
        assert v1.value == pytest.approx(v2.value, rel=1e-14)

    def test_requires_calibration(self):
        before, after = fitted_pair(seed=5)
        with pytest.raises(CalibrationError):
            bayesian_surprise(before, after, self.GRID, SurpriseConfig())

    def test_mismatched_hyperparameters(self):
        before, _ = fitted_pair(seed=6)
        other = build_model(before.X, before.y, Hyperparams(1.5, 1.0, 0.01))
        with pytest.raises(DomainError):
            bayesian_surprise(before, other, self.GRID, self.cfg())


class TestCalibrate:
    def test_constant_samples(self):
        cal = calibrate([0.3] * 8, k_bayesian=5.0)
        assert cal.threshold == pytest.approx(0.3)

    def test_hand_value(self):
        cal = calibrate([0.0, 1.0, 2.0, 3.0, 4.0], k_bayesian=2.0)
        assert cal.threshold == pytest.approx(2.0 + 2.0 * math.sqrt(2.0))
        assert cal.threshold == pytest.approx(4.828, abs=5e-4)

    def test_translation_equivariance(self):
        base = calibrate([0.1, 0.4, 0.2, 0.9, 0.5], 2.0)
        shifted = calibrate([x + 1.3 for x in [0.1, 0.4, 0.2, 0.9, 0.5]], 2.0)
        assert shifted.threshold == pytest.approx(base.threshold + 1.3)

    def test_too_few_samples(self):
        with pytest.raises(CalibrationError):
            calibrate([0.1, 0.2, 0.3, 0.4], 2.0)


class TestLooCalibration:
    def test_counts_and_positivity(self):
        rng = np.random.default_rng(11)
        X = rng.uniform(-2, 2, size=(10, 1))
        y = np.cos(X).ravel() + rng.normal(scale=0.05, size=10)
        model = build_model(X, y, Hyperparams(0.8, 1.0, 0.01))
        grid = reference_grid(np.array([[-2.0, 2.0]]), 16, seed=2)
        kls = loo_calibration_kls(model, grid)
        assert len(kls) == 10
        assert all(k >= 0 for k in kls)
        cal = calibrate(kls, 2.0)
        assert cal.threshold > 0
