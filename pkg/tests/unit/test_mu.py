"""Tests for the centralized-precoder power statistic."""

import numpy as np
import pytest

from src.models.channel import ChannelStats
from src.models.errors import SingularPrecoderError
from src.models.grouping import Grouping
from src.network.channel import draw_estimate_batch
from src.network.seeding import STREAM_MU, derive_rng
from src.precoding.mu import MuEstimator, check_skipped, estimate_mu
from src.precoding.zero_forcing import centralized_batch


@pytest.fixture
def stats():
    beta = np.array([[1.0, 2.0, 0.5, 1.5], [0.7, 0.3, 1.1, 2.5]])
    return ChannelStats(beta=beta, gamma=0.6 * beta)


class TestEstimateMu:
    def test_single_ap_inverse_wishart(self):
        gamma = np.array([[1.0, 0.5, 2.0]])
        stats = ChannelStats(beta=gamma.copy(), gamma=gamma)
        mu = estimate_mu(stats, Grouping(centralized=(0, 1, 2)), n_draws=10_000, seed=0, num_antennas=8)
        np.testing.assert_allclose(mu[0], 1.0 / ((8 - 3) * gamma[0]), rtol=0.03)

    def test_scales_inversely_with_gamma(self, stats):
        grouping = Grouping(centralized=(0, 2))
        doubled = ChannelStats(beta=2 * stats.beta, gamma=2 * stats.gamma)
        mu = estimate_mu(stats, grouping, n_draws=200, seed=4, num_antennas=4)
        mu2 = estimate_mu(doubled, grouping, n_draws=200, seed=4, num_antennas=4)
        np.testing.assert_allclose(mu2, mu / 2, rtol=1e-9)

    def test_single_draw(self, stats):
        grouping = Grouping(centralized=(3, 1))
        mu = estimate_mu(stats, grouping, n_draws=1, seed=2, num_antennas=4)
        g_hat = draw_estimate_batch(stats, 4, 1, derive_rng(2, STREAM_MU, 0))
        w_c, _ = centralized_batch(g_hat, grouping, 1e12)
        np.testing.assert_allclose(mu, np.sum(np.abs(w_c[0]) ** 2, axis=-1))

    def test_shape_and_positivity(self, stats):
        mu = estimate_mu(stats, Grouping(centralized=(0, 1, 2)), n_draws=50, seed=1, num_antennas=4)
        assert mu.shape == (2, 3)
        assert np.all(mu > 0)

    def test_empty_group(self, stats):
        assert estimate_mu(stats, Grouping(distributed=(0,)), 10, 0, 4).shape == (2, 0)

    def test_batching_does_not_matter_for_one_batch(self, stats):
        grouping = Grouping(centralized=(0, 1))
        a = estimate_mu(stats, grouping, n_draws=100, seed=3, num_antennas=4, batch_size=100)
        b = estimate_mu(stats, grouping, n_draws=100, seed=3, num_antennas=4, batch_size=500)
        np.testing.assert_array_equal(a, b)

    def test_rejects_zero_draws(self, stats):
        with pytest.raises(ValueError):
            estimate_mu(stats, Grouping(centralized=(0,)), 0, 0, 4)


class TestCheckSkipped:
    def test_within_budget(self):
        check_skipped(1, 100, "test")

    def test_over_budget(self):
        with pytest.raises(SingularPrecoderError):
            check_skipped(2, 100, "test")


class TestMuEstimator:
    def test_caches_per_centralized_set(self, stats):
        provider = MuEstimator(stats, num_antennas=4, n_draws=20, seed=1)
        first = provider(Grouping(centralized=(0, 1), distributed=(2,)))
        second = provider(Grouping(centralized=(0, 1), distributed=(3,)))
        assert first is second

    def test_same_draws_for_every_grouping(self, stats):
        provider = MuEstimator(stats, num_antennas=4, n_draws=20, seed=1)
        direct = estimate_mu(stats, Grouping(centralized=(2,)), n_draws=20, seed=1, num_antennas=4)
        np.testing.assert_array_equal(provider(Grouping(centralized=(2,))), direct)
