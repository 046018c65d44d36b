#  test_oracle.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

from dataclasses import replace
import numpy as np
import pytest
from scipy.special import expit
from physprop.camera import PinholeCamera
from physprop.errors import (NoBounceDetectedError, NonPositiveSlopeError,
                             InsufficientSamplesError, WrongCurvatureError,
                             NonPositiveEstimateError, NonFiniteEstimateError,
                             ModelNotTrainedError,
                             DegenerateConfigurationError)
from physprop.gru import GruParams
from physprop.observe import render_observations, clip_to_view
from physprop.oracle import (Estimate, normalize_trajectory, smooth,
                             estimate_elasticity_ratio,
                             estimate_elasticity_gru, estimate_viscosity,
                             estimate_friction, estimate_friction_naive,
                             relative_score)
from physprop.scene import (FrictionScene, sample_camera, sample_scene,
                            with_camera)
from physprop.simulate import simulate
from physprop.util import example_scene

E_SWEEP = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
MU_SWEEP = [0.02, 0.04, 0.06, 0.08, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2]


def observe(scene, noise_sigma=0.0, seed=0):
    camera = PinholeCamera(scene.camera)
    track = clip_to_view(simulate(scene), camera)
    return render_observations(track, camera, noise_sigma, seed)


def bounce(e=0.5, noise_sigma=0.0, seed=0):
    scene = replace(example_scene("elasticity"), restitution=e)
    return observe(scene, noise_sigma, seed)


def slide(mu, camera=None, **kwargs):
    scene = replace(example_scene("friction"), friction=mu, **kwargs)
    if camera is not None:
        scene = with_camera(scene, camera)
    return observe(scene)


class TestNormalize:
    def test_key_points(self):
        obs = bounce(0.5)
        traj = normalize_trajectory(obs.heights, obs.times)
        assert traj.refined
        assert traj.values[traj.drop_idx] == 1.0
        assert traj.values[traj.contact_idx] == pytest.approx(0.0, abs=1e-9)
        assert traj.peak_value == pytest.approx(0.25, abs=1e-9)
        assert 0 == traj.drop_idx < traj.contact_idx < traj.peak_idx
        assert np.all(np.diff(traj.times) > 0)

    def test_similarity_invariance(self):
        obs = bounce(0.7)
        a = normalize_trajectory(obs.heights, obs.times)
        b = normalize_trajectory(3.7 * obs.heights + 120.0, obs.times)
        assert np.allclose(a.values, b.values, atol=1e-9)
        assert a.peak_idx == b.peak_idx

    def test_scale_invariance(self):
        obs = bounce(0.3)
        e = estimate_elasticity_ratio(normalize_trajectory(obs.heights,
                                                           obs.times))
        scaled = estimate_elasticity_ratio(normalize_trajectory(
            0.01 * obs.heights, obs.times))
        assert scaled.value == pytest.approx(e.value, abs=1e-9)

    def test_default_times(self):
        obs = bounce(0.5)
        traj = normalize_trajectory(obs.heights)
        assert traj.peak_value == pytest.approx(0.25, abs=1e-9)

    def test_monotone_series(self):
        with pytest.raises(NoBounceDetectedError):
            normalize_trajectory(np.linspace(100.0, 0.0, 50))

    def test_small_bounce_below_noise(self):
        y = np.concatenate([np.linspace(100.0, 0.0, 30), [1.0, 2.0, 1.0],
                            np.zeros(20)])
        normalize_trajectory(y, noise_sigma=0.0, refine=False)
        with pytest.raises(NoBounceDetectedError):
            normalize_trajectory(y, noise_sigma=1.0)

    def test_unrefined(self):
        obs = bounce(0.5)
        traj = normalize_trajectory(obs.heights, obs.times, refine=False)
        assert not traj.refined
        assert len(traj.values) == len(obs.heights)
        assert traj.values[traj.contact_idx] == 0.0
        assert traj.values[0] == 1.0
        assert 0.2 < traj.peak_value <= 0.25 + 1e-9

    def test_noisy(self):
        obs = bounce(0.6, noise_sigma=1.0, seed=5)
        traj = normalize_trajectory(obs.heights, obs.times, noise_sigma=1.0)
        assert estimate_elasticity_ratio(traj).value == pytest.approx(
            0.6, abs=0.05)

    def test_readout(self):
        obs = bounce(0.5)
        traj = normalize_trajectory(obs.heights, obs.times)
        seq = traj.readout()
        assert seq.shape == (32,)
        assert seq[0] == 1.0
        assert seq[16] == pytest.approx(0.0, abs=1e-9)
        assert seq[-1] == pytest.approx(traj.peak_value, abs=1e-12)
        assert traj.readout(4).shape == (8,)

    def test_smooth(self):
        y = np.array([3.0, 0.0, 3.0, 0.0])
        assert np.allclose(smooth(y), [2.0, 2.0, 1.0, 1.0])
        assert np.array_equal(smooth(y, 1), y)


class TestElasticity:
    @pytest.mark.parametrize("e", E_SWEEP)
    def test_sweep(self, e):
        obs = bounce(e)
        est = estimate_elasticity_ratio(normalize_trajectory(obs.heights,
                                                             obs.times))
        assert est.value == pytest.approx(e, abs=1e-3)
        assert est.kind == "elasticity"
        assert est.estimator == "ratio-oracle"

    def test_viewpoint_spread(self):
        scene = example_scene("elasticity")
        values = []
        for seed in range(100):
            obs = observe(with_camera(scene, sample_camera("elasticity",
                                                           "A1", seed)))
            traj = normalize_trajectory(obs.heights, obs.times)
            values.append(estimate_elasticity_ratio(traj).value)
        values = np.array(values)
        assert values.std() / values.mean() < 0.02

    def test_gru_needs_model(self):
        obs = bounce(0.5)
        traj = normalize_trajectory(obs.heights, obs.times)
        with pytest.raises(ModelNotTrainedError):
            estimate_elasticity_gru(traj, None)
        est = estimate_elasticity_gru(traj, GruParams.zeros(4))
        assert est.value == 0.5
        assert est.estimator == "gru"


class TestViscosity:
    def test_linear_area(self):
        t = np.linspace(0.0, 1.0, 11)
        assert estimate_viscosity(1.0 + 2.0 * t, t).value == \
            pytest.approx(0.5)

    def test_proportional_to_viscosity(self):
        scene = example_scene("viscosity")
        thin = observe(replace(scene, viscosity=1e-4))
        thick = observe(replace(scene, viscosity=1e-3))
        a = estimate_viscosity(thin.areas, thin.times).value
        b = estimate_viscosity(thick.areas, thick.times).value
        assert b / a == pytest.approx(10.0, rel=0.01)
        expected = 1e-3 * np.pi * 0.05 ** 2 / scene.spread_constant
        assert b == pytest.approx(expected, rel=1e-6)

    def test_exponent(self):
        t = np.linspace(0.0, 1.0, 11)
        assert estimate_viscosity(1.0 + 4.0 * t, t, exponent=0.5).value == \
            pytest.approx(0.5)

    def test_constant_area(self):
        t = np.linspace(0.0, 1.0, 11)
        with pytest.raises(NonPositiveSlopeError):
            estimate_viscosity(np.ones(11), t)
        with pytest.raises(NonPositiveSlopeError):
            estimate_viscosity(2.0 - t, t)

    def test_late_contact(self):
        t = np.linspace(0.0, 1.0, 11)
        areas = np.ones(11)
        areas[-3:] = [1.1, 1.2, 1.3]
        with pytest.raises(InsufficientSamplesError):
            estimate_viscosity(areas, t)


class TestFriction:
    def test_round_trip(self):
        obs = slide(0.1)
        est = estimate_friction(obs.corners, obs.times, 0.1)
        assert est.value == pytest.approx(0.1, rel=0.01)

    @pytest.mark.parametrize("domain", ["A1", "A2"])
    def test_sweep(self, domain):
        for i, seed in enumerate(range(20)):
            camera = sample_camera("friction", domain, seed)
            mu = MU_SWEEP[i % len(MU_SWEEP)]
            axis = "x" if seed % 2 else "y"
            obs = slide(mu, camera, axis=axis)
            est = estimate_friction(obs.corners, obs.times, 0.1)
            assert est.value == pytest.approx(mu, rel=0.01)

    def test_noisy_round_trip(self):
        scene = example_scene("friction")
        for seed in range(10):
            obs = observe(scene, noise_sigma=1.0, seed=seed)
            est = estimate_friction(obs.corners, obs.times, scene.cube_size)
            assert est.value == pytest.approx(0.1, rel=0.05)

    def test_ordering(self):
        low, high = slide(0.05), slide(0.15)
        assert estimate_friction(low.corners, low.times, 0.1).value < \
            estimate_friction(high.corners, high.times, 0.1).value

    def test_rectified_deceleration(self):
        t = np.arange(30) / 60.0
        x = 0.5 * t - 0.5 * 0.981 * t ** 2
        square = np.array([[0, 0], [0.1, 0], [0.1, 0.1], [0, 0.1]])
        corners = square[None, :, :] + np.column_stack(
            [x, np.zeros_like(x)])[:, None, :]
        est = estimate_friction(corners, t, 0.1)
        assert est.value == pytest.approx(0.1, rel=1e-9)

    def test_accelerating(self):
        t = np.arange(30) / 60.0
        x = 0.5 * t + 0.5 * t ** 2
        square = np.array([[0, 0], [0.1, 0], [0.1, 0.1], [0, 0.1]])
        corners = square[None, :, :] + np.column_stack(
            [x, np.zeros_like(x)])[:, None, :]
        with pytest.raises(WrongCurvatureError):
            estimate_friction(corners, t, 0.1)

    def test_degenerate_corners(self):
        corners = np.zeros((10, 4, 2))
        corners[:, :, 0] = [0.0, 1.0, 2.0, 3.0]
        with pytest.raises(DegenerateConfigurationError):
            estimate_friction(corners, np.arange(10) / 60.0, 0.1)

    def test_stops_too_early(self):
        t = np.arange(30) / 60.0
        square = np.array([[0, 0], [0.1, 0], [0.1, 0.1], [0, 0.1]])
        corners = np.repeat(square[None], 30, axis=0)
        with pytest.raises(InsufficientSamplesError):
            estimate_friction(corners, t, 0.1)

    def test_projective_beats_naive(self):
        better = 0
        for seed in range(100):
            domain = "A1" if seed < 50 else "A2"
            scene = sample_scene("friction", domain, seed)
            obs = observe(scene)
            est = estimate_friction(obs.corners, obs.times, scene.cube_size)
            err = abs(est.value - scene.friction) / scene.friction
            assert err < 0.01
            try:
                naive = estimate_friction_naive(obs.corners, obs.times,
                                                scene.cube_size)
                naive_err = abs(naive.value - scene.friction) / \
                    scene.friction
            except (WrongCurvatureError, InsufficientSamplesError):
                naive_err = np.inf
            better += naive_err > err
        assert better >= 90


class TestRelativeScore:
    def test_values(self):
        assert relative_score(1.0, 1.0) == 0.5
        assert relative_score(2.0, 1.0) == pytest.approx(2.0 / 3.0)
        assert relative_score(2.0, 1.0) == pytest.approx(expit(np.log(2.0)))

    def test_antisymmetry(self):
        rng = np.random.default_rng(0)
        for a, b in rng.uniform(0.01, 10.0, (100, 2)):
            assert relative_score(a, b) + relative_score(b, a) == \
                pytest.approx(1.0, abs=1e-12)

    def test_estimates(self):
        a = Estimate(0.3, "friction", "parabola-oracle")
        b = Estimate(0.1, "friction", "parabola-oracle")
        assert relative_score(a, b) > 0.5

    def test_non_positive(self):
        with pytest.raises(NonPositiveEstimateError):
            relative_score(0.0, 1.0)
        with pytest.raises(NonPositiveEstimateError):
            relative_score(1.0, -2.0)

    def test_ordering_from_oracles(self):
        scores = []
        for low, high in [(0.2, 0.7), (0.45, 0.5)]:
            a, b = bounce(high), bounce(low)
            ea = estimate_elasticity_ratio(normalize_trajectory(a.heights,
                                                                a.times))
            eb = estimate_elasticity_ratio(normalize_trajectory(b.heights,
                                                                b.times))
            scores.append(relative_score(ea, eb))
        assert all(s > 0.5 for s in scores)


class TestEstimate:
    def test_finite(self):
        with pytest.raises(NonFiniteEstimateError):
            Estimate(np.nan, "elasticity", "ratio-oracle")
        with pytest.raises(ValueError):
            Estimate(np.inf, "friction", "parabola-oracle")
        assert float(Estimate(0.25, "elasticity", "gru")) == 0.25


if __name__ == '__main__':
    pytest.main()
