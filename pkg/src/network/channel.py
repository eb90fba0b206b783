"""Small-scale fading and MMSE channel estimates.

Estimates are sampled directly from their known distribution,
g_hat ~ CN(0, gamma I) and g_err ~ CN(0, (beta - gamma) I), instead of
simulating the pilot observation.
"""

import numpy as np

from src.models.channel import ChannelDraw, ChannelStats
from src.models.system import Scenario
from src.network.seeding import STREAM_CHANNEL, complex_normal, derive_rng


def compute_gamma(beta: np.ndarray, tau_u: int, rho_u: float) -> np.ndarray:
    """MMSE estimate variance tau_u rho_u beta^2 / (tau_u rho_u beta + 1), element-wise.

    Negative inputs are clamped to zero, which maps to gamma = 0.
    """
    beta = np.maximum(np.asarray(beta, dtype=float), 0.0)
    snr = tau_u * rho_u * beta
    return snr * beta / (snr + 1.0)


def channel_stats(scenario: Scenario) -> ChannelStats:
    """Statistics of a drop under its own pilot budget."""
    params = scenario.params
    return ChannelStats(
        beta=scenario.beta,
        gamma=compute_gamma(scenario.beta, params.tau_u, params.rho_u),
    )


def draw_estimate_batch(
    stats: ChannelStats,
    num_antennas: int,
    n_draws: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw ``n_draws`` channel estimates, shape (n, M, K, L)."""
    shape = (n_draws, stats.num_aps, stats.num_users, num_antennas)
    return np.sqrt(stats.gamma)[None, :, :, None] * complex_normal(rng, shape)


def draw_channel_batch(
    stats: ChannelStats,
    num_antennas: int,
    n_draws: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n_draws`` (g_hat, g_err) pairs, each of shape (n, M, K, L)."""
    g_hat = draw_estimate_batch(stats, num_antennas, n_draws, rng)
    shape = g_hat.shape
    g_err = np.sqrt(stats.error_variance)[None, :, :, None] * complex_normal(rng, shape)
    return g_hat, g_err


def draw_channels(stats: ChannelStats, num_antennas: int, seed: int) -> ChannelDraw:
    """One channel realization, deterministic per seed."""
    rng = derive_rng(seed, STREAM_CHANNEL)
    g_hat, g_err = draw_channel_batch(stats, num_antennas, 1, rng)
    return ChannelDraw(g=g_hat[0] + g_err[0], g_hat=g_hat[0], g_err=g_err[0])
