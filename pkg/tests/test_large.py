#  test_large.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

import os
import numpy as np
import pytest
from physprop.benchmark import benchmark as run_benchmark, ORACLES
from physprop.dataset import RunConfig, cmd_generate, load_manifest, \
    read_records
from physprop.errors import EstimationError
from physprop.evaluate import cmd_evaluate, cmd_train_gru, trajectory
from physprop.gru import TrainConfig, load_checkpoint
from physprop.metrics import pearson
from physprop.oracle import (normalize_trajectory, estimate_elasticity_ratio,
                             estimate_elasticity_gru)

SIZES = {"train": 1, "test-1": 100, "test-2": 100}


@pytest.fixture(scope="module")
def large(tmp_path_factory):
    root = tmp_path_factory.mktemp("large")
    out = {}
    for prop in ORACLES:
        directory = str(root / prop)
        cmd_generate(RunConfig(prop, SIZES, noise_sigma=0.0, seed=0,
                               out=directory))
        out[prop] = directory
    return out


class TestOracleReproduction:
    @pytest.mark.parametrize("prop", list(ORACLES))
    def test_relative(self, large, tmp_path, prop):
        reports = cmd_evaluate(large[prop], ORACLES[prop], "relative",
                               out=str(tmp_path))
        for report in reports:
            assert 150 <= report.sample_count <= 200
            assert report.value >= 0.99

    @pytest.mark.parametrize("prop", list(ORACLES))
    def test_absolute(self, large, tmp_path, prop):
        reports = cmd_evaluate(large[prop], ORACLES[prop], "absolute",
                               out=str(tmp_path))
        for report in reports:
            assert report.value >= 0.97

    def test_reports_reproducible(self, large, tmp_path):
        directory = str(tmp_path / "again")
        cmd_generate(RunConfig.from_manifest(
            load_manifest(large["friction"]), directory))
        for out, source in (("a", large["friction"]), ("b", directory)):
            for task in ("relative", "absolute"):
                cmd_evaluate(source, "parabola-oracle", task,
                             out=str(tmp_path / out))
        names = sorted(os.listdir(tmp_path / "a"))
        assert names == sorted(os.listdir(tmp_path / "b"))
        assert len(names) == 8
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()

    def test_noisy_friction(self, tmp_path):
        directory = str(tmp_path / "friction")
        cmd_generate(RunConfig("friction", SIZES, noise_sigma=1.0, seed=0,
                               out=directory))
        for task in ("relative", "absolute"):
            report, = cmd_evaluate(directory, "parabola-oracle", task,
                                   out=str(tmp_path), splits=("test-1",))
            assert report.failures <= 20
            assert report.value >= 0.9

    def test_benchmark_oracles(self, benchmark):
        sizes = {"train": 1, "test-1": 8, "test-2": 8}
        results = benchmark.pedantic(run_benchmark, kwargs={
            "properties": ("viscosity",), "split_sizes": sizes},
            rounds=3, iterations=1)
        assert set(results) == {("viscosity", "relative"),
                                ("viscosity", "absolute")}
        assert all(len(reports) == 2 for reports in results.values())


@pytest.mark.slow
class TestGruReadout:
    def test_noisy_elasticity(self, tmp_path):
        directory = str(tmp_path / "elasticity")
        cmd_generate(RunConfig("elasticity", {"train": 300, "test-1": 100,
                                              "test-2": 1},
                               noise_sigma=1.0, seed=0, out=directory))
        config = TrainConfig(learning_rate=0.3, batch_size=32, epochs=600,
                             loss="BCE", hidden_size=16)
        cmd_train_gru(directory, config)
        params = load_checkpoint(os.path.join(directory, "gru.json"))

        gru, heuristic, truth = [], [], []
        for record in read_records(directory, "test-1"):
            obs = record.observations
            try:
                traj = trajectory(record)
                peaks = normalize_trajectory(obs.heights, obs.times,
                                             noise_sigma=obs.noise_sigma,
                                             refine=False)
                peak_value = estimate_elasticity_ratio(peaks).value
            except EstimationError:
                continue
            gru.append(estimate_elasticity_gru(traj, params).value)
            heuristic.append(peak_value)
            truth.append(record.ground_truth)
        assert len(truth) > 50
        r_gru = pearson(np.array(gru), np.array(truth))
        assert r_gru >= 0.9
        assert r_gru > pearson(np.array(heuristic), np.array(truth))


if __name__ == '__main__':
    pytest.main()
