"""Tests for the dense matrix reference: modulation, receivers, mapping, multi-pulse."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gfdm_modem.errors import ConfigError, SingularMatrix
from gfdm_modem.numerics import dft
from gfdm_modem.pulses import GfdmParams, PrototypePulse, make_prototype, shift_pulse
from gfdm_modem.reference import (
    MultiPulseComponent,
    build_matrix,
    compose_multipulse,
    demap_symbols,
    fbmc_oqam_modulate,
    map_symbols,
    oracle_demod_mf,
    oracle_demod_zf,
    oracle_modulate,
)


def random_grid(params, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((params.k, params.m)) + 1j * rng.standard_normal((params.k, params.m))


class TestBuildMatrix:
    def test_ofdm_matrix_is_scaled_inverse_dft(self):
        n = 8
        pulse = make_prototype("RECT_TD", GfdmParams(n, 1))
        mm = build_matrix(pulse)
        idx = np.arange(n)
        f_inv = np.exp(2j * np.pi * np.outer(idx, idx) / n)
        assert_allclose(mm.mat, f_inv / np.sqrt(n), atol=1e-12)

    def test_single_carrier_impulse_is_identity(self):
        params = GfdmParams(1, 8)
        time = np.zeros(8, dtype=complex)
        time[0] = 1.0
        pulse = PrototypePulse("RECT_TD", params, 0.0, 0.0, time, dft(time))
        assert_allclose(build_matrix(pulse).mat, np.eye(8), atol=1e-14)

    def test_unit_column_norms(self):
        pulse = make_prototype("RC", GfdmParams(8, 4), 0.5, 0.5)
        mm = build_matrix(pulse)
        assert_allclose(np.linalg.norm(mm.mat, axis=0), np.ones(32), atol=1e-12)

    def test_dirichlet_columns_are_orthogonal(self):
        pulse = make_prototype("DIRICHLET", GfdmParams(8, 4))
        a = build_matrix(pulse).mat
        gram = a.conj().T @ a
        assert np.abs(gram - np.eye(32)).max() <= 1e-8


class TestOracleReceivers:
    def test_zf_inverts_modulation(self):
        params = GfdmParams(8, 4)
        mm = build_matrix(make_prototype("RC", params, 0.5, 0.5))
        grid = random_grid(params, 0)
        est = oracle_demod_zf(mm, oracle_modulate(mm, grid))
        assert np.abs(est - grid).max() <= 1e-9

    def test_ofdm_mf_gain_is_constant(self):
        params = GfdmParams(8, 1)
        mm = build_matrix(make_prototype("RECT_TD", params))
        grid = random_grid(params, 1)
        est = oracle_demod_mf(mm, oracle_modulate(mm, grid))
        # Orthonormal columns: matched filtering is exact (gain one).
        assert np.abs(est - grid).max() <= 1e-10

    def test_even_even_sharp_rolloff_is_singular(self):
        mm = build_matrix(make_prototype("RC", GfdmParams(4, 4), 0.0, 0.0))
        with pytest.raises(SingularMatrix):
            oracle_demod_zf(mm, np.ones(16, dtype=complex))


class TestSymbolMapping:
    def test_full_sets_round_trip(self):
        params = GfdmParams(4, 2)
        rng = np.random.default_rng(2)
        d = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        grid = map_symbols(d, params)
        assert_allclose(grid.flatten(order="F"), d)
        assert_allclose(demap_symbols(grid, params), d)

    def test_single_active_position(self):
        params = GfdmParams(4, 2, k_on=(1,), m_on=(0,))
        grid = map_symbols(np.array([1.0 + 0j]), params)
        assert grid[1, 0] == 1.0
        assert np.count_nonzero(grid) == 1

    def test_sparse_sets_round_trip(self):
        params = GfdmParams(8, 4, k_on=(0, 3, 5), m_on=(1, 2))
        rng = np.random.default_rng(3)
        d = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert_allclose(demap_symbols(map_symbols(d, params), params), d)

    def test_size_mismatch(self):
        with pytest.raises(ConfigError):
            map_symbols(np.ones(3), GfdmParams(4, 2))


class TestMultiPulse:
    def test_single_component_equals_plain_modulation(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        grid = random_grid(params, 4)
        comp = MultiPulseComponent(pulse, params.k_on, params.m_on, grid)
        assert_allclose(
            compose_multipulse([comp]),
            oracle_modulate(build_matrix(pulse), grid),
            atol=1e-12,
        )

    def test_zero_grids_give_zero(self):
        params = GfdmParams(4, 4)
        pulse = make_prototype("DIRICHLET", params)
        comp = MultiPulseComponent(pulse, params.k_on, params.m_on, np.zeros((4, 4), complex))
        assert_allclose(compose_multipulse([comp, comp]), np.zeros(16), atol=1e-14)

    def test_half_step_partition_equals_merged_lattice(self):
        # Two pulses on disjoint even/odd subsymbol sets, the second delayed by
        # K/2, must equal one system with subsymbol step K/2 on the merged
        # positions {2m : m even} and {2m+1 : m odd}.
        k, m = 8, 4
        params = GfdmParams(k, m)
        n = params.n
        base = make_prototype("RC", params, 0.5, 0.5)
        delayed = shift_pulse(base, k // 2)
        rng = np.random.default_rng(5)
        g0 = rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))
        g1 = rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))
        evens = tuple(range(0, m, 2))
        odds = tuple(range(1, m, 2))
        x = compose_multipulse(
            [
                MultiPulseComponent(base, params.k_on, evens, g0),
                MultiPulseComponent(delayed, params.k_on, odds, g1),
            ]
        )

        step = k // 2
        idx = np.arange(n)
        merged = np.zeros(n, dtype=complex)
        for mm in range(m):
            pos = 2 * mm if mm % 2 == 0 else 2 * mm + 1
            data = g0 if mm % 2 == 0 else g1
            for kk in range(k):
                col = np.roll(base.time, pos * step) * np.exp(2j * np.pi * idx * kk * m / n)
                merged += data[kk, mm] * col
        assert np.abs(x - merged).max() <= 1e-12

    def test_mismatched_lengths_rejected(self):
        a = make_prototype("DIRICHLET", GfdmParams(4, 4))
        b = make_prototype("DIRICHLET", GfdmParams(4, 2))
        comps = [
            MultiPulseComponent(a, (0,), (0,), np.zeros((4, 4), complex)),
            MultiPulseComponent(b, (0,), (0,), np.zeros((4, 2), complex)),
        ]
        with pytest.raises(ConfigError):
            compose_multipulse(comps)


class TestOqam:
    def test_real_input_uses_only_first_stream(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        rng = np.random.default_rng(6)
        d = rng.standard_normal((8, 4)).astype(complex)
        x = fbmc_oqam_modulate(d, pulse)
        theta0 = np.where(np.arange(8) % 2 == 0, 1j, 1.0)
        x0 = oracle_modulate(build_matrix(pulse), theta0[:, None] * d.real)
        assert np.abs(x - x0).max() <= 1e-12

    def test_equals_two_pulse_composition(self):
        params = GfdmParams(8, 4)
        pulse = make_prototype("RC", params, 0.5, 0.5)
        rng = np.random.default_rng(7)
        d = rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))
        k_idx = np.arange(8)
        theta0 = np.where(k_idx % 2 == 0, 1j, 1.0)
        theta1 = np.where(k_idx % 2 == 0, 1.0, 1j)
        comps = [
            MultiPulseComponent(pulse, params.k_on, params.m_on, theta0[:, None] * d.real),
            MultiPulseComponent(
                shift_pulse(pulse, 4), params.k_on, params.m_on, theta1[:, None] * d.imag
            ),
        ]
        assert np.abs(fbmc_oqam_modulate(d, pulse) - compose_multipulse(comps)).max() <= 1e-10

    def test_phase_pattern(self):
        # Stream 0 rotates even subcarriers by j and leaves odd ones alone.
        params = GfdmParams(4, 2)
        pulse = make_prototype("DIRICHLET", params)
        mm = build_matrix(pulse)
        for k, factor in ((0, 1j), (1, 1.0)):
            d = np.zeros((4, 2), dtype=complex)
            d[k, 0] = 1.0  # purely real symbol: only stream 0 fires
            x = fbmc_oqam_modulate(d, pulse)
            assert_allclose(x, factor * mm.mat[:, k], atol=1e-12)

    def test_odd_subcarrier_count_rejected(self):
        params = GfdmParams(1, 4)
        pulse = make_prototype("DIRICHLET", params)
        with pytest.raises(ConfigError):
            fbmc_oqam_modulate(np.zeros((1, 4), complex), pulse)
