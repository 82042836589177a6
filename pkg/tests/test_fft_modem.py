"""Tests for the staged FFT pipeline: presets, wrappers, and oracle agreement."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gfdm_modem.analysis import cm_count
from gfdm_modem.errors import ConfigError
from gfdm_modem.fft_modem import (
    ArchConfig,
    MemoryConfig,
    StageConfig,
    demodulate_fd,
    demodulate_td,
    modulate_fd,
    modulate_td,
    preset,
    run_pipeline,
    single_stage_config,
)
from gfdm_modem.numerics import MulCounter, dft
from gfdm_modem.pulses import (
    GfdmParams,
    PrototypePulse,
    make_prototype,
    tx_window,
    window_pair,
)
from gfdm_modem.reference import build_matrix, oracle_demod_mf, oracle_modulate


def random_grid(params, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((params.k, params.m)) + 1j * rng.standard_normal((params.k, params.m))


def qpsk_grid(params, seed):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(params.k, params.m, 2))
    return ((2 * bits[..., 0] - 1) + 1j * (2 * bits[..., 1] - 1)) / np.sqrt(2)


class TestPresets:
    def test_td_modulator_row(self):
        cfg = preset("TD_MOD", GfdmParams(8, 4), np.ones((4, 8)))
        assert [s.size for s in cfg.stages[:3]] == [8, 4, 4]
        assert [s.inverse for s in cfg.stages[:3]] == [True, False, True]
        assert [s.enabled for s in cfg.stages] == [True, True, True, False]

    def test_fd_modulator_row(self):
        cfg = preset("FD_MOD", GfdmParams(8, 4), np.ones((8, 4)))
        assert [s.size for s in cfg.stages] == [4, 8, 8, 32]
        assert [s.inverse for s in cfg.stages] == [False, True, False, True]
        assert all(s.enabled for s in cfg.stages)

    def test_fd_demodulator_row(self):
        cfg = preset("FD_DEMOD", GfdmParams(8, 4), np.ones((8, 4)))
        assert not cfg.stages[0].enabled
        assert [s.size for s in cfg.stages[1:]] == [8, 8, 4]
        assert [s.inverse for s in cfg.stages[1:]] == [True, False, True]

    def test_td_demodulator_row(self):
        cfg = preset("TD_DEMOD", GfdmParams(8, 4), np.ones((4, 8)))
        assert [s.size for s in cfg.stages] == [32, 4, 4, 8]
        assert [s.inverse for s in cfg.stages] == [True, False, True, False]
        assert all(s.enabled for s in cfg.stages)

    def test_window_shape_checked(self):
        with pytest.raises(ConfigError):
            preset("TD_MOD", GfdmParams(8, 4), np.ones((8, 4)))
        with pytest.raises(ConfigError):
            preset("NOPE", GfdmParams(8, 4), np.ones((4, 8)))


class TestModulate:
    def test_ofdm_like_impulse(self):
        params = GfdmParams(4, 1)
        pulse = make_prototype("RECT_TD", params)
        grid = np.zeros((4, 1), dtype=complex)
        grid[0, 0] = 1.0
        x = modulate_td(grid, tx_window(pulse, "TD"))
        assert_allclose(x, np.full(4, 0.5), atol=1e-12)

    def test_single_carrier_multiplexing(self):
        params = GfdmParams(1, 4)
        time = np.zeros(4, dtype=complex)
        time[0] = 1.0
        pulse = PrototypePulse("RECT_TD", params, 0.0, 0.0, time, dft(time))
        grid = np.arange(1, 5, dtype=complex).reshape(1, 4)
        x = modulate_td(grid, tx_window(pulse, "TD"))
        assert_allclose(x, grid[0], atol=1e-12)

    def test_matches_oracle(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        mm = build_matrix(pulse)
        w_td = tx_window(pulse, "TD")
        for seed in range(5):
            grid = qpsk_grid(params, seed)
            ref = oracle_modulate(mm, grid)
            got = modulate_td(grid, w_td)
            assert np.abs(got - ref).max() <= 1e-10 * np.abs(ref).max()

    def test_fd_equals_td_through_final_stage(self):
        for k, m in [(4, 4), (8, 4), (4, 8), (16, 8)]:
            params = GfdmParams(k, m)
            pulse = make_prototype("RC", params, 0.5, 0.5)
            grid = random_grid(params, k * m)
            x_td = modulate_td(grid, tx_window(pulse, "TD"))
            x_fd = modulate_fd(grid, tx_window(pulse, "FD"), emit_time=True)
            assert np.abs(x_fd - x_td).max() <= 1e-10 * np.abs(x_td).max()
            spec = modulate_fd(grid, tx_window(pulse, "FD"))
            assert np.abs(dft(spec, inverse=True) / params.n - x_td).max() <= 1e-10

    def test_dirichlet_block_structure(self):
        params = GfdmParams(4, 2)
        pulse = make_prototype("DIRICHLET", params)
        grid = np.zeros((4, 2), dtype=complex)
        grid[2, :] = 1.0  # single active subcarrier
        spec = modulate_fd(grid, tx_window(pulse, "FD"))
        live = np.abs(spec) > 1e-12
        assert live[2 * 2 : 3 * 2].any()
        assert not live[: 2 * 2].any() and not live[3 * 2 :].any()

    def test_zero_grid(self):
        params = GfdmParams(4, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        spec = modulate_fd(np.zeros((4, 4), complex), tx_window(pulse, "FD"))
        assert_allclose(spec, np.zeros(16), atol=1e-14)

    def test_linearity(self):
        params = GfdmParams(8, 4)
        w = tx_window(make_prototype("RRC", params, 0.5, 0.5), "TD")
        a, b = random_grid(params, 10), random_grid(params, 11)
        lhs = modulate_td(0.7j * a + 2.0 * b, w)
        rhs = 0.7j * modulate_td(a, w) + 2.0 * modulate_td(b, w)
        assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()


class TestDemodulate:
    def test_zf_round_trip_fd(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        wp_td = window_pair(pulse, "TD", "ZF")
        wp_fd = window_pair(pulse, "FD", "ZF")
        grid = random_grid(params, 12)
        spec = dft(modulate_td(grid, wp_td.w_tx))
        est = demodulate_fd(spec, wp_fd.w_rx)
        assert np.abs(est - grid).max() <= 1e-9

    def test_zf_round_trip_td(self):
        params = GfdmParams(8, 8)
        pulse = make_prototype("RRC", params, 0.5, 0.5)
        wp = window_pair(pulse, "TD", "ZF")
        grid = random_grid(params, 13)
        est = demodulate_td(modulate_td(grid, wp.w_tx), wp.w_rx)
        assert np.abs(est - grid).max() <= 1e-9

    def test_mf_on_orthogonal_pulse_is_scaled_identity(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("DIRICHLET", params)
        wp = window_pair(pulse, "FD", "MF")
        grid = random_grid(params, 14)
        x = modulate_td(grid, tx_window(pulse, "TD"))
        est = demodulate_fd(dft(x), wp.w_rx)
        ratios = est[np.abs(grid) > 0.1] / grid[np.abs(grid) > 0.1]
        c = ratios.mean()
        assert c.real > 0 and abs(c.imag) <= 1e-10
        assert np.abs(ratios - c).max() <= 1e-9
        # argmax-preserving against the dense matched-filter reference
        ref = oracle_demod_mf(build_matrix(pulse), x)
        assert np.abs(est / c - ref).max() <= 1e-9

    def test_td_fd_receiver_duality(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        y = np.exp(2j * np.pi * np.arange(params.n) / params.n)
        for kind in ("ZF", "MF"):
            wp_td = window_pair(pulse, "TD", kind)
            wp_fd = window_pair(pulse, "FD", kind)
            a = demodulate_td(y, wp_td.w_rx)
            b = demodulate_fd(dft(y), wp_fd.w_rx)
            assert np.abs(a - b).max() <= 1e-10

    def test_zero_input(self):
        params = GfdmParams(4, 4)
        wp = window_pair(make_prototype("DIRICHLET", params), "FD", "ZF")
        assert_allclose(demodulate_fd(np.zeros(16, complex), wp.w_rx), np.zeros((4, 4)))


class TestPipeline:
    def test_full_bypass(self):
        off = StageConfig(4, enabled=False)
        cfg = ArchConfig("BYPASS", (off, off, off, off))
        x = np.arange(16, dtype=complex)
        assert_allclose(run_pipeline(cfg, x), x)

    def test_disabled_memories_pass_through(self):
        off = StageConfig(4, enabled=False)
        cfg = ArchConfig(
            "BYPASS",
            (off, off, off, off),
            MemoryConfig(4, 4, transpose=False),
            MemoryConfig(4, 4, transpose=False),
        )
        x = np.arange(16, dtype=complex)
        assert_allclose(run_pipeline(cfg, x), x)

    def test_preset_equals_wrapper(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        w = tx_window(pulse, "TD")
        grid = random_grid(params, 15)
        cfg = preset("TD_MOD", params, w.T)
        assert_allclose(
            run_pipeline(cfg, grid.flatten(order="F")),
            modulate_td(grid, w),
            atol=1e-12,
        )

    def test_single_stage_is_unnormalized_idft(self):
        n = 16
        rng = np.random.default_rng(16)
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        out = run_pipeline(single_stage_config(n, inverse=True), d)
        assert np.abs(out - dft(d, inverse=True)).max() <= 1e-12 * np.abs(out).max()

    def test_inconsistent_config_rejected(self):
        cfg = single_stage_config(8, inverse=False)
        with pytest.raises(ConfigError):
            run_pipeline(cfg, np.ones(12, dtype=complex))


class TestInstrumentation:
    @pytest.mark.parametrize("k,m", [(4, 4), (8, 4), (16, 16)])
    def test_link_count_matches_closed_form(self, k, m):
        params = GfdmParams(k, m)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        wp_td = window_pair(pulse, "TD", "ZF")
        wp_fd = window_pair(pulse, "FD", "ZF")
        grid = random_grid(params, 17)
        counter = MulCounter()
        x = modulate_td(grid, wp_td.w_tx, counter)
        spec = dft(x, counter=counter)
        demodulate_fd(spec, wp_fd.w_rx, counter)
        assert counter.count == cm_count("FFT_TD_FD", k, m)
