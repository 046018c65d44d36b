#  test_evaluate.py
#
#  Copyright 2026 The physprop developers
#
#  MIT license. See LICENSE for more information.

import builtins
import json
import logging
import os
import pandas as pd
import pytest
from physprop.dataset import RunConfig, cmd_generate, read_records
from physprop import evaluate
from physprop.errors import (DataError, EstimatorMismatchError,
                             EstimationError)
from physprop.evaluate import (cmd_evaluate, cmd_train_gru, cmd_report,
                               evaluate_split, predict, trajectory,
                               TRAINING_CURVE)
from physprop.gru import TrainConfig, load_checkpoint, gru_forward

SIZES = {"train": 6, "test-1": 16, "test-2": 16}


@pytest.fixture(scope="module")
def datasets(tmp_path_factory):
    root = tmp_path_factory.mktemp("datasets")
    out = {}
    for prop in ("elasticity", "viscosity", "friction"):
        directory = str(root / prop)
        cmd_generate(RunConfig(prop, SIZES, noise_sigma=0.0, seed=1,
                               out=directory, pairs_per_split=40))
        out[prop] = directory
    return out


class TestEvaluate:
    @pytest.mark.parametrize("prop,estimator", [
        ("elasticity", "ratio-oracle"),
        ("viscosity", "slope-oracle"),
        ("friction", "parabola-oracle"),
    ])
    def test_oracles(self, datasets, tmp_path, prop, estimator):
        relative = cmd_evaluate(datasets[prop], estimator, "relative",
                                out=str(tmp_path))
        absolute = cmd_evaluate(datasets[prop], estimator, "absolute",
                                out=str(tmp_path))
        assert [r.split for r in relative] == ["test-1", "test-2"]
        for report in relative:
            assert report.metric == "roc_auc"
            assert report.value >= 0.9
            assert report.sample_count <= 40
        for report in absolute:
            assert report.metric == "pearson"
            assert report.value >= 0.9
            assert report.sample_count + report.failures == 16
            assert report.record_count == 16
            assert report.failure_rate == report.failures / 16

        for split in ("test-1", "test-2"):
            name = "report-{}-relative-{}.json".format(estimator, split)
            with open(tmp_path / name) as handle:
                doc = json.load(handle)
            assert doc["schema_version"] == 1
            assert doc["property"] == prop
            assert doc["split"] == split
            pairs = pd.read_csv(tmp_path / "pairs-{}-absolute-{}.csv".format(
                estimator, split))
            assert list(pairs.columns) == ["prediction", "ground_truth"]

    def test_reports_default_to_dataset(self, datasets, tmp_path):
        directory = str(tmp_path / "copy")
        cmd_generate(RunConfig("friction", {"train": 1, "test-1": 4,
                                            "test-2": 4}, noise_sigma=0.0,
                               out=directory))
        cmd_evaluate(directory, "parabola-oracle", "absolute")
        assert os.path.exists(os.path.join(
            directory, "report-parabola-oracle-absolute-test-1.json"))

    def test_subsampled(self, datasets, tmp_path):
        reports = cmd_evaluate(datasets["viscosity"], "slope-oracle",
                               "relative", frames=16, out=str(tmp_path))
        assert all(r.value >= 0.9 for r in reports)

    def test_deterministic(self, datasets, tmp_path):
        for out in ("a", "b"):
            cmd_evaluate(datasets["elasticity"], "ratio-oracle", "relative",
                         out=str(tmp_path / out))
        for name in os.listdir(tmp_path / "a"):
            assert (tmp_path / "a" / name).read_bytes() == \
                (tmp_path / "b" / name).read_bytes()

    def test_mismatch(self, datasets):
        with pytest.raises(EstimatorMismatchError):
            cmd_evaluate(datasets["elasticity"], "slope-oracle", "relative")
        with pytest.raises(EstimatorMismatchError):
            cmd_train_gru(datasets["friction"], TrainConfig())
        with pytest.raises(ValueError):
            cmd_evaluate(datasets["elasticity"], "oracle", "relative")

    def test_missing_checkpoint(self, datasets, tmp_path):
        with pytest.raises(DataError):
            cmd_evaluate(datasets["elasticity"], "gru", "absolute",
                         checkpoint=str(tmp_path / "none.json"))

    def test_unknown_task(self, datasets):
        records = read_records(datasets["friction"], "test-1")
        with pytest.raises(ValueError):
            evaluate_split(records, "parabola-oracle", "ordinal")

    def test_failure_rate(self, datasets, monkeypatch, caplog):
        records = read_records(datasets["friction"], "test-1")
        failing = {r.record_id for r in records[:4]}

        def flaky(record, *args):
            if record.record_id in failing:
                raise EstimationError("no motion")
            return predict(record, *args)

        monkeypatch.setattr(evaluate, "predict", flaky)
        with caplog.at_level(logging.WARNING, logger="physprop.evaluate"):
            report = evaluate_split(records, "parabola-oracle", "absolute")
        assert report.failures == 4
        assert report.record_count == 16
        assert report.failure_rate == 0.25
        assert report.to_dict()["failure_rate"] == 0.25
        assert "25.0% of test-1" in caplog.text

    def test_predict(self, datasets):
        record = read_records(datasets["friction"], "test-1")[0]
        est = predict(record, "parabola-oracle")
        assert est.value == pytest.approx(record.ground_truth, rel=0.01)
        with pytest.raises(ValueError):
            predict(record, "oracle")


class TestTrainGru:
    def test_train_and_evaluate(self, datasets, tmp_path, monkeypatch):
        opened = []
        real_open = builtins.open

        def spy(file, *args, **kwargs):
            opened.append(str(file))
            return real_open(file, *args, **kwargs)

        monkeypatch.setattr(builtins, "open", spy)
        checkpoint = str(tmp_path / "gru.json")
        config = TrainConfig(epochs=3, batch_size=4, hidden_size=4)
        trainer = cmd_train_gru(datasets["elasticity"], config,
                                checkpoint=checkpoint)
        monkeypatch.undo()

        assert any(p.endswith("train.jsonl") for p in opened)
        names = [os.path.basename(p) for p in opened]
        assert not any(n.startswith(("test-1", "test-2")) for n in names)
        curve = pd.read_csv(tmp_path / TRAINING_CURVE)
        assert list(curve["epoch"]) == [0, 1, 2, 3]
        assert curve["loss"].tolist() == pytest.approx(trainer.history,
                                                       rel=1e-12)

        params = load_checkpoint(checkpoint)
        reports = cmd_evaluate(datasets["elasticity"], "gru", "absolute",
                               checkpoint=checkpoint,
                               out=str(tmp_path / "reports"))
        trajectories = []
        for record in read_records(datasets["elasticity"], "test-1"):
            try:
                trajectories.append(trajectory(record))
            except EstimationError:
                continue
        expected = [gru_forward(trainer.params, t.readout())[0]
                    for t in trajectories]
        predicted = [p for p, _ in reports[0].pairs]
        assert predicted == pytest.approx(expected, abs=0.0)
        again = [gru_forward(params, t.readout())[0] for t in trajectories]
        assert again == expected


class TestReport:
    def test_table(self, datasets, tmp_path):
        for task in ("relative", "absolute"):
            cmd_evaluate(datasets["friction"], "parabola-oracle", task,
                         out=str(tmp_path))
        table = cmd_report(str(tmp_path))
        assert list(table.columns) == ["property", "estimator", "task",
                                       "metric", "test-1", "test-2"]
        assert len(table) == 2
        assert set(table["metric"]) == {"roc_auc", "pearson"}
        assert os.path.exists(tmp_path / "table.csv")

    def test_no_reports(self, tmp_path):
        with pytest.raises(DataError):
            cmd_report(str(tmp_path))


if __name__ == '__main__':
    pytest.main()
