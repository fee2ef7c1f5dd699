import json

import numpy as np
import pytest

import wavebandit.harness as harness
from wavebandit.config import ExperimentConfig
from wavebandit.errors import ConfigError, StoreFormatError
from wavebandit.harness import (
    draw_truth,
    manifest_path,
    run_experiment,
    run_study,
    run_study_to_file,
    run_trial,
)
from wavebandit.losses import TruthSet
from wavebandit.mechanisms import ra, tempered, thompson
from wavebandit.seeding import derive_seed
from wavebandit.store import iter_records, lint_store, read_records, record_to_line

SMALL = ExperimentConfig(
    n_total=100,
    wave_sizes=(4, 10, 25),
    replications=4,
    mc_draws=200,
    sp_draws=500,
    master_seed=99,
)


class TestRunExperiment:
    def test_equal_truth_means_zero_regret(self):
        truth = TruthSet((1.0, 1.0, 1.0))
        for mechanism in SMALL.mechanism_kinds():
            rec = run_experiment(SMALL, mechanism, 10, truth, seed=5)
            assert rec.losses.r_sample == 0.0
            assert rec.losses.r_policy == 0.0
            assert rec.tie_flags["truth_tie"] is True

    def test_structural_shape(self):
        config = ExperimentConfig(n_total=4, wave_sizes=(2,), replications=1, mc_draws=50, sp_draws=50)
        rec = run_experiment(config, ra(), 2, TruthSet((0.5, 0.5, 0.5)), seed=1)
        assert sum(rec.counts) == 4
        assert rec.mechanism == "ra"
        assert rec.wave_size == 2

    def test_posteriors_track_deterministic_truth(self):
        truth = TruthSet((1.0, 0.0, 0.0))
        rec = run_experiment(SMALL, thompson(), 10, truth, seed=3)
        means = np.array(rec.alpha_final) / (np.array(rec.alpha_final) + np.array(rec.beta_final))
        assert means[0] > 0.9
        assert means[1] < 0.4 and means[2] < 0.4

    def test_thompson_concentrates_harder_than_ra(self):
        truth = TruthSet((1.0, 0.0, 0.0))
        thompson_wins = []
        ra_wins = []
        for trial in range(15):
            rec_t = run_experiment(SMALL, thompson(), 10, truth, seed=1000 + trial)
            rec_r = run_experiment(SMALL, ra(), 10, truth, seed=2000 + trial)
            thompson_wins.append(rec_t.counts[0])
            ra_wins.append(rec_r.counts[0])
        assert np.mean(thompson_wins) > np.mean(ra_wins)

    def test_deterministic_given_seed(self):
        truth = TruthSet((0.8, 0.5, 0.1))
        a = run_experiment(SMALL, tempered(0.2), 10, truth, seed=77)
        b = run_experiment(SMALL, tempered(0.2), 10, truth, seed=77)
        assert a == b

    def test_conservation(self):
        truth = TruthSet((0.6, 0.3, 0.2))
        for mechanism in SMALL.mechanism_kinds():
            rec = run_experiment(SMALL, mechanism, 25, truth, seed=11)
            assert sum(rec.counts) == SMALL.n_total
            mass = sum(rec.alpha_final) + sum(rec.beta_final)
            assert mass == pytest.approx(SMALL.n_total + 3 * 2.0, abs=1e-9)

    def test_indivisible_wave_size_rejected(self):
        with pytest.raises(ConfigError):
            run_experiment(SMALL, ra(), 7, TruthSet((0.5, 0.4, 0.3)), seed=0)

    def test_ra_expected_counts(self):
        # per-arm mean count over >= 1000 trials within 3 standard errors of n/K
        config = ExperimentConfig(
            n_total=120, wave_sizes=(10,), replications=1, mc_draws=50, sp_draws=50
        )
        totals = np.zeros(3)
        n_trials = 1000
        for trial in range(n_trials):
            rec = run_experiment(config, ra(), 10, TruthSet((0.6, 0.5, 0.4)), seed=trial)
            totals += rec.counts
        mean = totals / n_trials
        per_trial_sd = np.sqrt(120 * (1 / 3) * (2 / 3))
        se = per_trial_sd / np.sqrt(n_trials)
        assert np.all(np.abs(mean - 40.0) < 3 * se)


class TestStudy:
    def test_grid_arithmetic(self):
        records = list(run_study(ExperimentConfig(replications=2, mc_draws=20, sp_draws=20,
                                                  n_total=20, wave_sizes=(4, 10))))
        assert len(records) == 2 * 4 * 2

    def test_truth_paired_across_cells(self):
        records = run_trial(SMALL, trial=3)
        assert len({rec.theta_star for rec in records}) == 1
        assert len(records) == SMALL.cells_per_trial

    def test_truth_stream_uniform(self):
        config = ExperimentConfig(master_seed=5)
        n = 100_000
        draws = np.array([draw_truth(config, t).theta_star for t in range(n)])
        assert draws.shape == (n, 3)
        assert np.all(np.abs(draws.mean(axis=0) - 0.5) < 3 * (1 / np.sqrt(12)) / np.sqrt(n))
        per_bin = n / 10
        for k in range(3):
            hist, _ = np.histogram(draws[:, k], bins=10, range=(0, 1))
            assert np.all(np.abs(hist - per_bin) < 5 * np.sqrt(per_bin * 0.9))

    def test_seed_matches_coordinates(self):
        records = run_trial(SMALL, trial=2)
        for rec in records:
            mech_id = SMALL.mechanisms.index(rec.mechanism)
            assert rec.seed == derive_seed(SMALL.master_seed, 2, mech_id, rec.wave_size)


class TestStudyToFile:
    def test_worker_count_does_not_change_bytes(self, tmp_path):
        out1 = tmp_path / "w1.jsonl"
        out3 = tmp_path / "w3.jsonl"
        run_study_to_file(SMALL, out1, workers=1)
        run_study_to_file(SMALL, out3, workers=3)
        assert out1.read_bytes() == out3.read_bytes()

    def test_manifest_contents(self, tmp_path):
        out = tmp_path / "runs.jsonl"
        manifest = run_study_to_file(SMALL, out, workers=1)
        on_disk = json.loads(manifest_path(out).read_text())
        assert on_disk == manifest
        assert manifest["records"] == SMALL.replications * SMALL.cells_per_trial
        assert manifest["config_hash"] == SMALL.config_hash()
        assert manifest["partial"] is False

    def test_sink_failure_leaves_partial_manifest(self, tmp_path, monkeypatch):
        calls = {"n": 0}
        original = harness._trial_block

        def flaky(args):
            calls["n"] += 1
            if calls["n"] > 1:
                raise OSError("disk full")
            return original(args)

        monkeypatch.setattr(harness, "_trial_block", flaky)
        out = tmp_path / "partial.jsonl"
        with pytest.raises(OSError):
            run_study_to_file(SMALL, out, workers=1)
        on_disk = json.loads(manifest_path(out).read_text())
        assert on_disk["partial"] is True
        assert on_disk["records"] < SMALL.replications * SMALL.cells_per_trial


class TestStore:
    def test_round_trip(self, tmp_path):
        records = run_trial(SMALL, trial=0)
        path = tmp_path / "store.jsonl"
        path.write_text("".join(record_to_line(rec) + "\n" for rec in records))
        assert read_records(path) == records

    def test_malformed_line_reports_number(self, tmp_path):
        records = run_trial(SMALL, trial=0)
        lines = [record_to_line(rec) for rec in records]
        lines[2] = lines[2][:-10]
        path = tmp_path / "broken.jsonl"
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(StoreFormatError, match="line 3"):
            list(iter_records(path))

    def test_lint_passes_on_real_store(self, tmp_path):
        out = tmp_path / "runs.jsonl"
        run_study_to_file(SMALL, out, workers=1)
        n = lint_store(out, n_total=SMALL.n_total, prior=SMALL.prior)
        assert n == SMALL.replications * SMALL.cells_per_trial

    def test_lint_catches_count_violation(self, tmp_path):
        records = run_trial(SMALL, trial=0)
        data = json.loads(record_to_line(records[0]))
        data["counts"][0] += 1
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(data) + "\n")
        with pytest.raises(StoreFormatError, match="counts sum"):
            lint_store(path, n_total=SMALL.n_total)

    def test_lint_catches_loss_range_violation(self, tmp_path):
        records = run_trial(SMALL, trial=0)
        data = json.loads(record_to_line(records[0]))
        data["r_sample"] = 1.7
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(data) + "\n")
        with pytest.raises(StoreFormatError, match="r_sample"):
            lint_store(path)


class TestConfig:
    def test_divisibility_violation_names_field(self):
        with pytest.raises(ConfigError, match="wave_sizes"):
            ExperimentConfig(n_total=1000, wave_sizes=(3,))

    def test_json_round_trip(self, tmp_path):
        path = tmp_path / "config.json"
        SMALL.to_json(path)
        assert ExperimentConfig.from_json(path) == SMALL

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="unknown"):
            ExperimentConfig.from_dict({"replications": 2, "warmup": 5})

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ExperimentConfig.from_json(tmp_path / "nope.json")

    def test_hash_is_stable_and_sensitive(self):
        assert SMALL.config_hash() == SMALL.config_hash()
        other = ExperimentConfig.from_dict({**SMALL.to_dict(), "master_seed": 100})
        assert other.config_hash() != SMALL.config_hash()
