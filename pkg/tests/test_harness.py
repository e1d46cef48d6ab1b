import numpy as np
import pytest

from otfs_sbl.errors import ConfigError
from otfs_sbl.harness import (
    CSV_HEADER,
    ResultRow,
    RunConfig,
    emit_csv,
    load_config,
    parse_config_text,
    parse_results_csv,
    run_trial,
    sweep,
)

TINY = dict(
    M=8,
    N=8,
    cp_len=4,
    m_tau=4,
    n_nu=3,
    g_nu=6,
    n_p=(16,),
    snapshots=(2,),
    l_p=2,
    trials=3,
)


class TestRunConfig:
    def test_defaults_match_reference_parameterisation(self):
        cfg = RunConfig()
        assert (cfg.M, cfg.N) == (32, 32)
        assert cfg.delta_f == 15e3 and cfg.f_c == 4e9
        assert (cfg.m_tau, cfg.n_nu, cfg.g_nu) == (16, 10, 20)
        assert cfg.cp_len == 16
        assert cfg.n_p == (80,)
        assert cfg.l_p == 5
        assert cfg.snapshots == (10,)
        assert cfg.trials == 500
        assert not cfg.frac_doppler

    def test_scalars_promoted_to_tuples(self):
        cfg = RunConfig(snr_db=5.0, n_p=64, estimators="sbl")
        assert cfg.snr_db == (5.0,)
        assert cfg.n_p == (64,)
        assert cfg.estimators == ("sbl",)

    def test_rejects_unknown_estimator(self):
        with pytest.raises(ConfigError):
            RunConfig(estimators=("bogus",))

    def test_rejects_bad_channel_mode(self):
        with pytest.raises(ConfigError):
            RunConfig(channel="rayleigh")

    def test_points_cartesian_order(self):
        cfg = RunConfig(**TINY, snr_db=(0.0, 5.0), k_model=(1, 2))
        pts = list(cfg.points())
        assert len(pts) == 4
        assert [(p.scalar("k_model"), p.scalar("snr_db")) for p in pts] == [
            (1, 0.0),
            (1, 5.0),
            (2, 0.0),
            (2, 5.0),
        ]


class TestRunTrial:
    def test_deterministic(self):
        cfg = RunConfig(**TINY, estimators=("gmm_sbl", "omp"), snr_db=(0.0,))
        a = run_trial(cfg, 4)
        b = run_trial(cfg, 4)
        assert a == b

    def test_different_trials_differ(self):
        cfg = RunConfig(**TINY, estimators=("omp",), snr_db=(0.0,))
        assert run_trial(cfg, 0) != run_trial(cfg, 1)

    def test_all_estimators_present(self):
        names = ("gmm_sbl", "sbl", "omp", "focuss", "lasso", "oracle_mmse")
        cfg = RunConfig(**TINY, estimators=names, snr_db=(5.0,))
        res = run_trial(cfg, 0)
        assert set(res) == set(names)
        for nmse_val, ser_val, elapsed in res.values():
            assert nmse_val >= 0
            assert 0 <= ser_val <= 1
            assert elapsed == 0.0  # timing off by default

    def test_near_noiseless_recovery(self):
        cfg = RunConfig(**{**TINY, "l_p": 1}, estimators=("gmm_sbl", "sbl", "omp"), snr_db=(80.0,))
        res = run_trial(cfg, 2)
        for nmse_val, _, _ in res.values():
            assert 10 * np.log10(nmse_val) < -30


class TestSweep:
    def test_single_point_single_estimator(self):
        cfg = RunConfig(**TINY, estimators=("omp",), snr_db=(0.0,))
        rows = sweep(cfg)
        assert len(rows) == 1
        assert rows[0].trials == 3

    def test_row_count_snr_by_estimator(self):
        cfg = RunConfig(**TINY, estimators=("omp", "sbl"), snr_db=(0.0, 2.0, 4.0, 6.0, 8.0))
        rows = sweep(cfg)
        assert len(rows) == 10

    def test_rows_deterministic_and_worker_invariant(self):
        cfg = RunConfig(**TINY, estimators=("sbl", "omp"), snr_db=(0.0, 5.0))
        serial = sweep(cfg)
        again = sweep(cfg)
        assert serial == again
        parallel = sweep(RunConfig(**TINY, estimators=("sbl", "omp"), snr_db=(0.0, 5.0), workers=2))
        assert serial == parallel

    def test_snapshot_sweep_improves_nmse(self):
        cfg = RunConfig(
            **{**TINY, "snapshots": (1, 8), "trials": 20},
            estimators=("gmm_sbl",),
            snr_db=(0.0,),
        )
        rows = sweep(cfg)
        by_l = {row.scenario: row.nmse for row in rows}
        l1 = [v for k, v in by_l.items() if "L1-" in k][0]
        l8 = [v for k, v in by_l.items() if "L8-" in k][0]
        assert l8 < l1


class TestCsv:
    def rows(self):
        return [
            ResultRow("np16-L2-K2-gmm1", "sbl", 0.0, 0.1234567891234, -9.0857, 0.25, 3, 0.0, 1234),
            ResultRow("np16-L2-K2-gmm1", "omp", 5.0, 0.5, -3.0102999566, 0.5, 3, 0.0, 1234),
        ]

    def test_header_only_for_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_csv([], path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_roundtrip(self, tmp_path):
        path = tmp_path / "rows.csv"
        emit_csv(self.rows(), path)
        parsed = parse_results_csv(path)
        for orig, back in zip(self.rows(), parsed):
            assert back.scenario == orig.scenario
            assert back.estimator == orig.estimator
            assert back.trials == orig.trials
            assert back.seed == orig.seed
            assert back.nmse == pytest.approx(orig.nmse, rel=1e-9)
            assert back.ser == pytest.approx(orig.ser, rel=1e-9)

    def test_byte_identical(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(self.rows(), p1)
        emit_csv(self.rows(), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_significant_digits(self, tmp_path):
        path = tmp_path / "digits.csv"
        emit_csv(self.rows(), path)
        nmse_field = path.read_text().splitlines()[1].split(",")[3]
        mantissa = nmse_field.split("e")[0].replace(".", "").lstrip("-")
        assert len(mantissa) >= 9


class TestConfigParsing:
    def test_grammar(self):
        text = """
        # comment line
        snr_db = 0, 5, 10
        n_p = 80, 140
        estimators = gmm_sbl, sbl  # trailing comment
        trials = 7
        frac_doppler = true
        channel = case_b
        """
        values = parse_config_text(text)
        assert values["snr_db"] == (0.0, 5.0, 10.0)
        assert values["n_p"] == (80, 140)
        assert values["estimators"] == ("gmm_sbl", "sbl")
        assert values["trials"] == 7
        assert values["frac_doppler"] is True
        assert values["channel"] == "case_b"

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config_text("nope = 3")

    def test_missing_equals(self):
        with pytest.raises(ConfigError):
            parse_config_text("just words")

    def test_bad_boolean(self):
        with pytest.raises(ConfigError):
            parse_config_text("frac_doppler = maybe")

    def test_file_plus_overrides(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("trials = 9\nsnr_db = 0\n")
        cfg = load_config(path, {"trials": 11, "base_seed": None})
        assert cfg.trials == 11  # override wins
        assert cfg.snr_db == (0.0,)
        assert cfg.base_seed == 1234  # None overrides are ignored
