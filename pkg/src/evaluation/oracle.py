"""Monte Carlo oracle for the closed-form SINR and power expressions.

The oracle works from raw realizations only: it draws (g_hat, g_err), rebuilds both
precoders per draw, forms the effective gains

    a_kt = sum_m g_mk^H w_mt sqrt(eta_mt)

and estimates the use-and-then-forget SINR

    |E{a_kk}|^2 / (Var{a_kk} + sum_{t != k} E{|a_kt|^2} + 1).

Moments are accumulated batch by batch with the pairwise (Chan) merge, so the
result does not depend on the batch size beyond floating-point reassociation.
"""

import logging

import numpy as np

from src.models.channel import ChannelStats
from src.models.grouping import Grouping
from src.models.power import PowerAllocation
from src.models.report import OracleResult
from src.network.channel import draw_channel_batch
from src.network.seeding import STREAM_ORACLE, derive_rng
from src.precoding.mu import check_skipped
from src.precoding.zero_forcing import COND_LIMIT, precoder_batch

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_DRAWS = 20_000


class RunningMoments:
    """Streaming mean and second central moment along axis 0 (complex-safe)."""

    def __init__(self, shape: tuple[int, ...], dtype=float):
        self.count = 0
        self.mean = np.zeros(shape, dtype=dtype)
        self.m2 = np.zeros(shape)

    def update(self, batch: np.ndarray) -> None:
        n_b = batch.shape[0]
        if n_b == 0:
            return
        mean_b = batch.mean(axis=0)
        m2_b = np.sum(np.abs(batch - mean_b) ** 2, axis=0)
        total = self.count + n_b
        delta = mean_b - self.mean
        self.mean = self.mean + delta * (n_b / total)
        self.m2 = self.m2 + m2_b + np.abs(delta) ** 2 * (self.count * n_b / total)
        self.count = total

    @property
    def variance(self) -> np.ndarray:
        """Population variance E{|x - E x|^2}."""
        if self.count == 0:
            return np.zeros_like(self.m2)
        return self.m2 / self.count

    @property
    def stderr(self) -> np.ndarray:
        if self.count < 2:
            return np.full_like(self.m2, np.inf)
        return np.sqrt(self.m2 / (self.count - 1) / self.count)


def _scaled_precoders(w_c: np.ndarray, w_d: np.ndarray, alloc: PowerAllocation) -> np.ndarray:
    """Stack sqrt(eta) w for the served users: (n, M, K_c + K_d, L)."""
    scaled_c = w_c * np.sqrt(alloc.eta_c)[None, None, :, None]
    scaled_d = w_d * np.sqrt(alloc.eta_d)[None, :, :, None]
    return np.concatenate([scaled_c, scaled_d], axis=2)


def oracle_statistics(
    stats: ChannelStats,
    grouping: Grouping,
    alloc: PowerAllocation,
    num_antennas: int,
    n_draws: int = DEFAULT_ORACLE_DRAWS,
    seed: int = 0,
    batch_size: int = 500,
    cond_limit: float = COND_LIMIT,
) -> OracleResult:
    """Run the oracle and return every estimated moment.

    Raises:
        SingularPrecoderError: More than 1% of the draws were degenerate.
    """
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    m = stats.num_aps
    served = list(grouping.served)
    k_s = len(served)

    desired = RunningMoments((k_s,), dtype=complex)
    cross = RunningMoments((k_s, k_s))  # mean of |a_kt|^2
    power = RunningMoments((m,))
    mu = RunningMoments((m, grouping.k_c))

    for b, start in enumerate(range(0, n_draws, batch_size)):
        n = min(batch_size, n_draws - start)
        rng = derive_rng(seed, STREAM_ORACLE, b)
        g_hat, g_err = draw_channel_batch(stats, num_antennas, n, rng)
        w_c, w_d, valid = precoder_batch(g_hat, grouping, stats, cond_limit)
        if not np.any(valid):
            continue
        g = (g_hat + g_err)[valid][:, :, served, :]
        w_c, w_d = w_c[valid], w_d[valid]
        w = _scaled_precoders(w_c, w_d, alloc)

        gains = np.einsum("bmkl,bmtl->bkt", g.conj(), w)
        desired.update(np.diagonal(gains, axis1=1, axis2=2))
        cross.update(np.abs(gains) ** 2)
        power.update(np.sum(np.abs(w) ** 2, axis=(2, 3)))
        mu.update(np.sum(np.abs(w_c) ** 2, axis=-1))

    n_skipped = n_draws - desired.count
    check_skipped(n_skipped, n_draws, "oracle")

    interference = cross.mean.sum(axis=1) - np.diagonal(cross.mean)
    desired_mean = np.abs(desired.mean)
    sinr = desired_mean**2 / (desired.variance + interference + 1.0)
    logger.info("Oracle: %d draws (%d skipped), %d served users", desired.count, n_skipped, k_s)
    return OracleResult(
        users=grouping.served,
        sinr=sinr,
        desired_mean=desired_mean,
        desired_var=desired.variance,
        desired_stderr=desired.stderr,
        interference=interference,
        ap_power=power.mean,
        mu=mu.mean,
        n_draws=desired.count,
        n_skipped=n_skipped,
    )


def mc_uatf_sinr(
    stats: ChannelStats,
    grouping: Grouping,
    alloc: PowerAllocation,
    num_antennas: int,
    n_draws: int = DEFAULT_ORACLE_DRAWS,
    seed: int = 0,
    **kwargs,
) -> np.ndarray:
    """Monte Carlo UatF SINR of the served users, centralized first."""
    return oracle_statistics(stats, grouping, alloc, num_antennas, n_draws, seed, **kwargs).sinr


def mc_ap_power(
    stats: ChannelStats,
    grouping: Grouping,
    alloc: PowerAllocation,
    num_antennas: int,
    n_draws: int = DEFAULT_ORACLE_DRAWS,
    seed: int = 0,
    **kwargs,
) -> np.ndarray:
    """Monte Carlo mean of ||s_m||^2 per AP."""
    return oracle_statistics(stats, grouping, alloc, num_antennas, n_draws, seed, **kwargs).ap_power
