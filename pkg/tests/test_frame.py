import numpy as np
import pytest
from scipy.linalg import dft

from otfs_sbl.errors import CpTooLong, DimensionMismatch, NonPositiveNoise
from otfs_sbl.frame import (
    FrameConfig,
    add_cp,
    dd_effective_channel,
    demodulate,
    isfft,
    modulate,
    noise_cov_dd,
    remove_cp,
    sfft,
)


def unitary_dft(n):
    return dft(n) / np.sqrt(n)


def random_grid(m, n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def cfg_for(m, n, cp=2):
    return FrameConfig(M=m, N=n, delta_f=15e3, cp_len=cp)


class TestFrameConfig:
    def test_defaults_satisfy_t_deltaf(self):
        cfg = FrameConfig(M=32, N=32, delta_f=15e3, cp_len=16)
        assert cfg.T * cfg.delta_f == pytest.approx(1.0, abs=1e-15)
        assert cfg.frame_len == 1024
        assert cfg.frame_duration == pytest.approx(32 / 15e3)
        assert cfg.bandwidth == pytest.approx(480e3)

    def test_rejects_inconsistent_t(self):
        with pytest.raises(ValueError):
            FrameConfig(M=4, N=4, delta_f=15e3, T=1.0, cp_len=2)

    def test_rejects_long_cp(self):
        with pytest.raises(ValueError):
            FrameConfig(M=2, N=2, delta_f=15e3, cp_len=4)


class TestIsfftSfft:
    def test_scalar_case(self):
        x = np.array([[2.0 - 1.0j]])
        assert np.allclose(isfft(x), x)
        assert np.allclose(sfft(x), x)

    def test_all_ones_concentrates(self):
        m, n = 4, 8
        x = np.ones((m, n), dtype=complex)
        y = isfft(x)
        expected = np.zeros((m, n), dtype=complex)
        expected[0, 0] = np.sqrt(m * n)
        assert np.allclose(y, expected, atol=1e-12)
        # mirrored role for sfft
        z = sfft(np.ones((m, n), dtype=complex))
        assert z[0, 0] == pytest.approx(np.sqrt(m * n))

    def test_matches_explicit_matrix_product(self):
        m, n = 5, 7
        x = random_grid(m, n, 0)
        fm, fn = unitary_dft(m), unitary_dft(n)
        assert np.allclose(isfft(x), fm @ x @ fn.conj().T, atol=1e-12)
        assert np.allclose(sfft(x), fm.conj().T @ x @ fn, atol=1e-12)

    def test_inverse_pair_and_norm_preservation(self):
        for m, n in [(2, 2), (16, 8), (64, 64)]:
            x = random_grid(m, n, m * n)
            y = isfft(x)
            assert np.allclose(sfft(y), x, atol=1e-12)
            assert np.linalg.norm(y) == pytest.approx(np.linalg.norm(x), rel=1e-10)


class TestModulateDemodulate:
    def test_zero_frame(self):
        cfg = cfg_for(3, 4)
        assert np.allclose(modulate(np.zeros((3, 4)), cfg), 0.0)

    def test_single_symbol_column(self):
        cfg = FrameConfig(M=4, N=1, delta_f=15e3, cp_len=2)
        x = random_grid(4, 1, 1)
        assert np.allclose(modulate(x, cfg), x.flatten(order="F"))

    def test_matches_kronecker_oracle(self):
        cfg = cfg_for(4, 4)
        x = random_grid(4, 4, 2)
        fn = unitary_dft(4)
        s_oracle = np.kron(fn.conj().T, np.eye(4)) @ x.flatten(order="F")
        assert np.allclose(modulate(x, cfg), s_oracle, atol=1e-12)

    def test_demodulate_matches_kronecker_oracle(self):
        cfg = cfg_for(3, 4)
        r = np.random.default_rng(3).standard_normal(12) + 0j
        fn = unitary_dft(4)
        y_oracle = (np.kron(fn, np.eye(3)) @ r).reshape((3, 4), order="F")
        assert np.allclose(demodulate(r, cfg), y_oracle, atol=1e-12)

    def test_demodulate_zero(self):
        cfg = cfg_for(2, 3)
        assert np.allclose(demodulate(np.zeros(6), cfg), 0.0)

    def test_two_point_dft_oracle(self):
        cfg = cfg_for(3, 2)
        rng = np.random.default_rng(4)
        r = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        y = demodulate(r, cfg)
        r_mat = r.reshape((3, 2), order="F")
        assert np.allclose(y[:, 0], (r_mat[:, 0] + r_mat[:, 1]) / np.sqrt(2))
        assert np.allclose(y[:, 1], (r_mat[:, 0] - r_mat[:, 1]) / np.sqrt(2))

    def test_roundtrip_identity_channel(self):
        cfg = cfg_for(8, 4)
        x = random_grid(8, 4, 5)
        assert np.allclose(demodulate(modulate(x, cfg), cfg), x, atol=1e-10)

    def test_dimension_checks(self):
        cfg = cfg_for(2, 2)
        with pytest.raises(DimensionMismatch):
            modulate(np.zeros((3, 2)), cfg)
        with pytest.raises(DimensionMismatch):
            demodulate(np.zeros(5), cfg)


class TestCyclicPrefix:
    def test_add(self):
        assert np.array_equal(add_cp(np.array([1, 2, 3]), 1), [3, 1, 2, 3])

    def test_remove(self):
        assert np.array_equal(remove_cp(np.array([3, 1, 2, 3]), 1), [1, 2, 3])

    def test_roundtrip(self):
        rng = np.random.default_rng(6)
        s = rng.standard_normal(10) + 1j * rng.standard_normal(10)
        assert np.array_equal(remove_cp(add_cp(s, 4), 4), s)

    def test_too_long(self):
        with pytest.raises(CpTooLong):
            add_cp(np.arange(3), 3)


class TestEffectiveChannel:
    def test_identity_passthrough(self):
        cfg = cfg_for(3, 2)
        assert np.allclose(dd_effective_channel(np.eye(6), cfg), np.eye(6), atol=1e-12)

    def test_scalar_multiple(self):
        cfg = cfg_for(2, 3)
        c = 0.3 - 1.2j
        assert np.allclose(dd_effective_channel(c * np.eye(6), cfg), c * np.eye(6), atol=1e-12)

    def test_single_path_matches_kron_oracle(self):
        cfg = cfg_for(2, 2)
        # one path with unit gain, delay 1, no Doppler: H = Pi^1
        h = np.zeros((4, 4), dtype=complex)
        p = np.arange(4)
        h[p, (p - 1) % 4] = 1.0
        fn = unitary_dft(2)
        u = np.kron(fn, np.eye(2))
        oracle = u @ h @ u.conj().T
        assert np.allclose(dd_effective_channel(h, cfg), oracle, atol=1e-12)

    def test_random_matches_kron_oracle(self):
        cfg = cfg_for(3, 4)
        rng = np.random.default_rng(7)
        h = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
        fn = unitary_dft(4)
        u = np.kron(fn, np.eye(3))
        oracle = u @ h @ u.conj().T
        assert np.allclose(dd_effective_channel(h, cfg), oracle, atol=1e-10)

    def test_unitary_input_keeps_unit_singular_values(self):
        cfg = cfg_for(4, 4)
        rng = np.random.default_rng(8)
        q, _ = np.linalg.qr(rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16)))
        sv = np.linalg.svd(dd_effective_channel(q, cfg), compute_uv=False)
        assert np.allclose(sv, 1.0, atol=1e-8)

    def test_wrong_shape(self):
        with pytest.raises(DimensionMismatch):
            dd_effective_channel(np.eye(5), cfg_for(2, 2))


class TestNoiseCov:
    def test_unit_variance(self):
        cfg = cfg_for(2, 3)
        assert np.allclose(noise_cov_dd(cfg, 1.0), np.eye(6))

    def test_half_variance(self):
        cfg = cfg_for(2, 2)
        assert np.allclose(noise_cov_dd(cfg, 0.5), 0.5 * np.eye(4))

    def test_trace(self):
        cfg = cfg_for(4, 8)
        assert np.trace(noise_cov_dd(cfg, 0.3)).real == pytest.approx(0.3 * 32)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveNoise):
            noise_cov_dd(cfg_for(2, 2), 0.0)
