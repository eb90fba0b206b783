"""Tests for MMSE estimate statistics and channel sampling."""

import numpy as np
import pytest

from src.models.channel import ChannelDraw, ChannelStats
from src.network.channel import compute_gamma, draw_channel_batch, draw_channels
from src.network.seeding import child_seed, derive_rng


class TestComputeGamma:
    def test_unit_pilot_snr(self):
        assert compute_gamma(0.01, tau_u=100, rho_u=1.0) == pytest.approx(0.005)

    def test_perfect_csi_limit(self):
        assert compute_gamma(0.01, tau_u=1, rho_u=1e9) == pytest.approx(0.01, rel=1e-6)

    def test_zero_channel(self):
        assert compute_gamma(0.0, tau_u=20, rho_u=0.5) == 0.0

    def test_strictly_below_beta(self):
        beta = np.array([[0.1, 1.0, 10.0]])
        gamma = compute_gamma(beta, tau_u=20, rho_u=0.5)
        assert np.all((gamma > 0) & (gamma < beta))

    def test_monotone_in_pilot_power(self):
        low = compute_gamma(1.0, tau_u=20, rho_u=0.01)
        high = compute_gamma(1.0, tau_u=20, rho_u=1.0)
        assert low < high < 1.0


class TestChannelStats:
    def test_rejects_gamma_above_beta(self):
        with pytest.raises(ValueError, match="gamma"):
            ChannelStats(beta=np.array([[1.0]]), gamma=np.array([[2.0]]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            ChannelStats(beta=np.ones((2, 3)), gamma=np.ones((3, 2)))

    def test_error_variance(self):
        stats = ChannelStats(beta=np.array([[1.0, 2.0]]), gamma=np.array([[0.25, 2.0]]))
        np.testing.assert_allclose(stats.error_variance, [[0.75, 0.0]])


class TestDrawChannels:
    def test_estimate_variance(self):
        stats = ChannelStats(beta=np.array([[0.01]]), gamma=np.array([[0.005]]))
        g_hat, g_err = draw_channel_batch(stats, 1, 100_000, derive_rng(0, 9))
        assert np.mean(np.abs(g_hat) ** 2) == pytest.approx(0.005, rel=0.02)
        assert np.mean(np.abs(g_err) ** 2) == pytest.approx(0.005, rel=0.02)

    def test_estimate_and_error_uncorrelated(self):
        stats = ChannelStats(beta=np.array([[1.0]]), gamma=np.array([[0.5]]))
        n = 100_000
        g_hat, g_err = draw_channel_batch(stats, 1, n, derive_rng(0, 9))
        cross = np.mean(g_hat * np.conj(g_err))
        # 3 sigma of the sample mean of a product of independent CN(0, 0.5) entries
        assert abs(cross) < 3 * 0.5 / np.sqrt(n)

    def test_perfect_csi_has_no_error(self):
        beta = np.array([[1.0, 2.0], [0.5, 3.0]])
        draw = draw_channels(ChannelStats(beta=beta, gamma=beta.copy()), num_antennas=4, seed=1)
        assert np.all(draw.g_err == 0)
        np.testing.assert_array_equal(draw.g, draw.g_hat)

    def test_sum_of_estimate_and_error(self, small_stats):
        draw = draw_channels(small_stats, num_antennas=8, seed=3)
        np.testing.assert_allclose(draw.g, draw.g_hat + draw.g_err)
        assert draw.g.shape == (4, 6, 8)

    def test_deterministic_per_seed(self, small_stats):
        a = draw_channels(small_stats, 8, seed=3)
        b = draw_channels(small_stats, 8, seed=3)
        np.testing.assert_array_equal(a.g, b.g)

    def test_draw_rejects_mismatched_shapes(self):
        with pytest.raises(ValueError):
            ChannelDraw(g=np.zeros((1, 1, 2)), g_hat=np.zeros((1, 1, 2)), g_err=np.zeros((1, 2, 2)))


class TestSeeding:
    def test_streams_are_independent(self):
        assert derive_rng(0, 1).random() != derive_rng(0, 2).random()

    def test_child_seed_is_stable(self):
        assert child_seed(5, 3) == child_seed(5, 3)
        assert child_seed(5, 3) != child_seed(5, 4)
        assert 0 <= child_seed(5, 3) < 2**32

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            derive_rng(-1)
        with pytest.raises(ValueError):
            child_seed(0, -2)
