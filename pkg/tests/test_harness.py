"""Harness tests: trial runs, policies, CSV/plot emission, parallelism."""

import numpy as np
import pytest

import blockgs as bg
from blockgs.errors import AssumptionFailureError
from blockgs.harness import _CSV_HEADER


def _config(**overrides):
    base = dict(
        method="bcgs2",
        m=40,
        n=16,
        block_width=4,
        generator="svd-spectrum",
        kappa=1e6,
        seed=7,
        policy="warn",
        trials=3,
    )
    base.update(overrides)
    return bg.ExperimentConfig(**base)


class TestConfigValidation:
    def test_rejects_block_width_for_column_method(self):
        with pytest.raises(ValueError, match="does not take"):
            _config(method="cgs", block_width=4)

    def test_requires_block_for_block_method(self):
        with pytest.raises(ValueError, match="needs --block"):
            _config(block_width=None)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            _config(m=10, n=20)
        with pytest.raises(ValueError):
            _config(kappa=0.1)
        with pytest.raises(ValueError):
            _config(trials=0)

    def test_explicit_partition(self):
        cfg = _config(block_width=None, blocks=(8, 4, 4))
        assert cfg.partition().widths == (8, 4, 4)

    def test_partition_must_cover(self):
        cfg = _config(block_width=None, blocks=(8, 4))
        with pytest.raises(ValueError):
            cfg.partition()


class TestRun:
    def test_rows_in_trial_order_with_measurements(self):
        rows = bg.run(_config())
        assert len(rows) == 3
        for row in rows:
            assert row.method == "bcgs2"
            assert (row.m, row.n, row.p) == (40, 16, 4)
            assert 0.0 <= row.defect < 1e-12
            assert 0.0 <= row.rel_residual < 1e-12
            assert row.assumptions_passed
            assert np.isfinite(row.kappa_measured)
            assert row.wall_time_seconds >= 0.0

    def test_contracts_hold_on_passing_rows(self):
        bg.run(_config(trials=5, kappa=1e10), verify_contracts=True)

    def test_every_method_runs(self):
        for method in ("cgs", "mgs", "cgs2", "householder"):
            rows = bg.run(_config(method=method, block_width=None, trials=1))
            assert len(rows) == 1 and rows[0].method == method
        rows = bg.run(_config(method="bcgs", trials=1))
        assert rows[0].method == "bcgs"

    def test_deterministic_given_seed(self):
        r1 = bg.run(_config())
        r2 = bg.run(_config())
        for a, b in zip(r1, r2):
            assert (a.kappa_measured, a.defect, a.rel_residual) == (
                b.kappa_measured,
                b.defect,
                b.rel_residual,
            )

    def test_threads_env_gives_same_measurements(self, monkeypatch):
        sequential = bg.run(_config(trials=4))
        monkeypatch.setenv("BGS_THREADS", "3")
        threaded = bg.run(_config(trials=4))
        for a, b in zip(sequential, threaded):
            assert a.defect == b.defect and a.kappa_measured == b.kappa_measured

    def test_lauchli_generator_through_harness(self):
        cfg = bg.ExperimentConfig(
            method="cgs", m=21, n=20, generator="lauchli", kappa=1e8, seed=0,
            policy="warn", trials=1,
        )
        rows = bg.run(cfg)
        assert rows[0].defect > 1e-2


class TestPolicies:
    def test_strict_aborts_on_degraded_matrix(self, tmp_path):
        from conftest import degraded_cascade_matrix

        a, part, first_bad = degraded_cascade_matrix()
        path = tmp_path / "bad.mtx"
        bg.write_matrix_market(path, a)
        cfg = bg.ExperimentConfig(
            method="bcgs2", m=a.shape[0], n=a.shape[1],
            block_width=part.max_width, generator="file", input_path=str(path),
            policy="strict", trials=1,
        )
        with pytest.raises(AssumptionFailureError) as info:
            bg.run(cfg)
        assert info.value.block_index >= first_bad
        assert "check A" in str(info.value)

    def test_warn_records_and_continues(self, tmp_path):
        from conftest import degraded_cascade_matrix

        a, part, _ = degraded_cascade_matrix()
        path = tmp_path / "bad.mtx"
        bg.write_matrix_market(path, a)
        cfg = bg.ExperimentConfig(
            method="bcgs2", m=a.shape[0], n=a.shape[1],
            block_width=part.max_width, generator="file", input_path=str(path),
            policy="warn", trials=1,
        )
        rows = bg.run(cfg)
        assert not rows[0].assumptions_passed
        assert rows[0].defect > 1e-10


class TestEmission:
    def test_csv_roundtrip_exact(self, tmp_path):
        rows = bg.run(_config())
        path = tmp_path / "out.csv"
        bg.emit_csv(rows, path)
        back = bg.parse_csv(path)
        assert back == rows

    def test_csv_header(self, tmp_path):
        path = tmp_path / "out.csv"
        bg.emit_csv(bg.run(_config(trials=1)), path)
        assert path.read_text().splitlines()[0] == _CSV_HEADER

    def test_csv_deterministic_across_runs_modulo_timing(self, tmp_path):
        # Timing is informational; every measured column reproduces exactly.
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        bg.emit_csv(bg.run(_config()), p1)
        bg.emit_csv(bg.run(_config()), p2)
        strip = lambda text: [
            ",".join(line.split(",")[:-1]) for line in text.splitlines()
        ]
        assert strip(p1.read_text()) == strip(p2.read_text())

    def test_plotdata_series_per_method(self, tmp_path):
        rows = bg.run(_config(trials=2)) + bg.run(
            _config(method="cgs", block_width=None, trials=2)
        )
        path = tmp_path / "plot.dat"
        bg.emit_plotdata(rows, path)
        text = path.read_text()
        blocks = text.strip().split("\n\n")
        assert len(blocks) == 2
        assert blocks[0].startswith("# bcgs2")
        assert blocks[1].startswith("# cgs")
        assert len(blocks[0].splitlines()) == 3  # header + 2 rows

    def test_kappa_sweep_separates_methods(self, tmp_path):
        # One-pass defect grows with conditioning; two-pass stays at roundoff.
        cgs_defects, bcgs2_defects = [], []
        for kappa in (1e2, 1e6, 1e10):
            cgs_defects.append(
                bg.run(_config(method="cgs", block_width=None, trials=1, kappa=kappa))[0].defect
            )
            bcgs2_defects.append(bg.run(_config(trials=1, kappa=kappa))[0].defect)
        assert cgs_defects[0] < cgs_defects[1] < cgs_defects[2]
        assert all(d <= 1e-13 for d in bcgs2_defects)
