"""Monte Carlo estimate of the centralized-precoder power statistic mu_mk = E{||w_mk^c||^2}."""

import logging

import numpy as np

from src.models.channel import ChannelStats
from src.models.errors import SingularPrecoderError
from src.models.grouping import Grouping
from src.network.channel import draw_estimate_batch
from src.network.seeding import STREAM_MU, derive_rng
from src.precoding.zero_forcing import COND_LIMIT, centralized_batch

logger = logging.getLogger(__name__)

DEFAULT_MU_DRAWS = 300
MAX_SKIP_FRACTION = 0.01


def check_skipped(n_skipped: int, n_draws: int, what: str) -> None:
    """Apply the skip-and-count policy for degenerate draws.

    Raises:
        SingularPrecoderError: More than 1% of the draws were singular.
    """
    if n_skipped == 0:
        return
    if n_skipped > MAX_SKIP_FRACTION * n_draws:
        raise SingularPrecoderError(f"{what}: {n_skipped}/{n_draws} draws singular (limit 1%)")
    logger.warning("%s: skipped %d/%d singular draws", what, n_skipped, n_draws)


def estimate_mu(
    stats: ChannelStats,
    grouping: Grouping,
    n_draws: int,
    seed: int,
    num_antennas: int,
    batch_size: int = 500,
    cond_limit: float = COND_LIMIT,
) -> np.ndarray:
    """Empirical mean of ||w_mk^c||^2 over ``n_draws`` independent realizations.

    Batch ``b`` draws estimates for all K users from ``derive_rng(seed, STREAM_MU, b)``,
    so every grouping of the same drop sees the same realizations.

    Returns:
        M x K_c matrix, columns in ``grouping.centralized`` order.
    """
    if n_draws < 1:
        raise ValueError(f"n_draws must be >= 1, got {n_draws}")
    m = stats.num_aps
    if grouping.k_c == 0:
        return np.zeros((m, 0))

    total = np.zeros((m, grouping.k_c))
    n_valid = 0
    for b, start in enumerate(range(0, n_draws, batch_size)):
        n = min(batch_size, n_draws - start)
        g_hat = draw_estimate_batch(stats, num_antennas, n, derive_rng(seed, STREAM_MU, b))
        w_c, valid = centralized_batch(g_hat, grouping, cond_limit)
        total += np.sum(np.abs(w_c[valid]) ** 2, axis=-1).sum(axis=0)
        n_valid += int(np.count_nonzero(valid))

    check_skipped(n_draws - n_valid, n_draws, "mu estimation")
    return total / n_valid


class MuEstimator:
    """Caches mu per centralized set for one drop.

    Callable as ``mu_provider(grouping)`` by the grouping sweep.
    """

    def __init__(
        self,
        stats: ChannelStats,
        num_antennas: int,
        n_draws: int = DEFAULT_MU_DRAWS,
        seed: int = 0,
        batch_size: int = 500,
        cond_limit: float = COND_LIMIT,
    ):
        self.stats = stats
        self.num_antennas = num_antennas
        self.n_draws = n_draws
        self.seed = seed
        self.batch_size = batch_size
        self.cond_limit = cond_limit
        self._cache: dict[tuple[int, ...], np.ndarray] = {}

    def __call__(self, grouping: Grouping) -> np.ndarray:
        key = grouping.centralized
        if key not in self._cache:
            self._cache[key] = estimate_mu(
                self.stats,
                Grouping(centralized=key),
                n_draws=self.n_draws,
                seed=self.seed,
                num_antennas=self.num_antennas,
                batch_size=self.batch_size,
                cond_limit=self.cond_limit,
            )
        return self._cache[key]
