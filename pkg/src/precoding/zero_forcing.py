"""Centralized and local zero-forcing precoders.

Centralized ZF inverts the stacked ML x K_c estimate of all APs and hands each AP
its L-row block. Local ZF inverts the L x K_d estimate of one AP and is scaled so
that E{||w||^2} = 1, using the closed form E{||G (G^H G)^-1 pi_j||^2} =
1 / ((L - K_d) gamma_mk).
"""

import logging

import numpy as np

from src.models.channel import ChannelDraw, ChannelStats
from src.models.errors import GroupSizeError, SingularPrecoderError
from src.models.grouping import Grouping
from src.models.power import PrecoderSet
from src.network.channel import draw_estimate_batch
from src.network.seeding import STREAM_NORMALIZER, derive_rng

logger = logging.getLogger(__name__)

COND_LIMIT = 1e12


def zf_directions(h: np.ndarray, cond_limit: float = COND_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Pseudo-inverse directions H (H^H H)^-1 for a stack of N x K matrices.

    Args:
        h: Array of shape (..., N, K) with N >= K.
        cond_limit: Gram matrices with a larger condition number are rejected.

    Returns:
        (w, valid): w has the shape of ``h``; ``valid`` has shape ``h.shape[:-2]``
        and is False where the Gram matrix is singular or ill-conditioned (those
        entries of ``w`` are zero).
    """
    k = h.shape[-1]
    batch_shape = h.shape[:-2]
    if k == 0:
        return np.zeros_like(h), np.ones(batch_shape, dtype=bool)
    if h.shape[-2] < k:
        return np.zeros_like(h), np.zeros(batch_shape, dtype=bool)

    gram = np.conj(np.swapaxes(h, -1, -2)) @ h
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(gram)
    valid = np.isfinite(cond) & (cond < cond_limit)

    eye = np.eye(k, dtype=gram.dtype)
    safe_gram = np.where(valid[..., None, None], gram, eye)
    # gram = C C^H  =>  gram^-1 = C^-H C^-1
    chol = np.linalg.cholesky(safe_gram)
    chol_inv = np.linalg.solve(chol, np.broadcast_to(eye, chol.shape))
    gram_inv = np.conj(np.swapaxes(chol_inv, -1, -2)) @ chol_inv
    w = h @ gram_inv
    w = np.where(valid[..., None, None], w, 0.0)
    return w, valid


def centralized_zf(draw: ChannelDraw, grouping: Grouping, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Centralized ZF vectors w_mk^c = E_m G (G^H G)^-1 e_i for every k in K_c.

    Returns:
        Array (M, K_c, L); sum_m g_hat_mk'^H w_mk = delta_kk'.

    Raises:
        SingularPrecoderError: The stacked estimate is rank deficient.
    """
    w_c, valid = centralized_batch(draw.g_hat[None], grouping, cond_limit)
    if not valid[0]:
        raise SingularPrecoderError(f"stacked centralized estimate is singular for K_c={grouping.k_c}")
    return w_c[0]


def local_zf(
    draw: ChannelDraw,
    grouping: Grouping,
    ap: int,
    stats: ChannelStats,
    n_norm_draws: int | None = None,
    seed: int = 0,
    cond_limit: float = COND_LIMIT,
) -> np.ndarray:
    """Normalized local ZF vectors of one AP for every k in K_d.

    Args:
        draw: Channel realization.
        grouping: User grouping; only ``distributed`` is used.
        ap: AP index.
        stats: Channel statistics (gamma enters the normalizer).
        n_norm_draws: When given, estimate the normalizer by Monte Carlo with this
            many fresh draws instead of the closed form.
        seed: Seed of the Monte Carlo normalizer.

    Returns:
        Array (K_d, L).

    Raises:
        GroupSizeError: K_d >= L (closed-form normalizer undefined).
        SingularPrecoderError: The local estimate is rank deficient.
    """
    _check_local_size(grouping.k_d, draw.num_antennas)
    d_idx = list(grouping.distributed)
    h = np.swapaxes(draw.g_hat[ap, d_idx, :], 0, 1)  # (L, K_d)
    directions, valid = zf_directions(h, cond_limit)
    if not valid:
        raise SingularPrecoderError(f"local estimate at AP {ap} is singular for K_d={grouping.k_d}")

    if n_norm_draws is None:
        expected_sq = 1.0 / ((draw.num_antennas - grouping.k_d) * stats.gamma[ap, d_idx])
    else:
        expected_sq = _mc_local_normalizer(stats, grouping, ap, draw.num_antennas, n_norm_draws, seed, cond_limit)
    return np.swapaxes(directions, 0, 1) / np.sqrt(expected_sq)[:, None]


def build_precoders(
    draw: ChannelDraw,
    grouping: Grouping,
    stats: ChannelStats,
    mu: np.ndarray | None = None,
    cond_limit: float = COND_LIMIT,
) -> PrecoderSet:
    """Hybrid precoders of one realization."""
    w_c = centralized_zf(draw, grouping, cond_limit)
    m = draw.g.shape[0]
    if grouping.k_d:
        w_d = np.stack([local_zf(draw, grouping, ap, stats, cond_limit=cond_limit) for ap in range(m)])
    else:
        w_d = np.zeros((m, 0, draw.num_antennas), dtype=complex)
    return PrecoderSet(w_c=w_c, w_d=w_d, mu=mu if mu is not None else np.zeros((m, grouping.k_c)))


def precoder_batch(
    g_hat: np.ndarray,
    grouping: Grouping,
    stats: ChannelStats,
    cond_limit: float = COND_LIMIT,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hybrid precoders for a batch of estimates of shape (n, M, K, L).

    Returns:
        (w_c, w_d, valid) with w_c (n, M, K_c, L), w_d (n, M, K_d, L) and a
        per-draw validity mask.
    """
    w_c, valid_c = centralized_batch(g_hat, grouping, cond_limit)
    w_d, valid_d = local_batch(g_hat, grouping, stats, cond_limit)
    return w_c, w_d, valid_c & valid_d


def _check_local_size(k_d: int, num_antennas: int) -> None:
    if k_d and num_antennas <= k_d:
        raise GroupSizeError(f"local ZF needs L > K_d, got L={num_antennas}, K_d={k_d}")


def centralized_batch(g_hat: np.ndarray, grouping: Grouping, cond_limit: float) -> tuple[np.ndarray, np.ndarray]:
    """Centralized ZF for a batch (n, M, K, L); returns (w_c (n, M, K_c, L), valid)."""
    n, m, _, l_ant = g_hat.shape
    k_c = grouping.k_c
    if k_c == 0:
        return np.zeros((n, m, 0, l_ant), dtype=complex), np.ones(n, dtype=bool)
    # (n, M, K_c, L) -> (n, M, L, K_c) -> stacked (n, M*L, K_c): rows (m-1)L+1..mL belong to AP m
    stacked = np.swapaxes(g_hat[:, :, list(grouping.centralized), :], 2, 3).reshape(n, m * l_ant, k_c)
    w, valid = zf_directions(stacked, cond_limit)
    w_c = np.swapaxes(w.reshape(n, m, l_ant, k_c), 2, 3)
    return w_c, valid


def local_batch(
    g_hat: np.ndarray,
    grouping: Grouping,
    stats: ChannelStats,
    cond_limit: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized local ZF for a batch; a draw is valid only if every AP inverts."""
    n, m, _, l_ant = g_hat.shape
    k_d = grouping.k_d
    if k_d == 0:
        return np.zeros((n, m, 0, l_ant), dtype=complex), np.ones(n, dtype=bool)
    _check_local_size(k_d, l_ant)
    d_idx = list(grouping.distributed)
    h = np.swapaxes(g_hat[:, :, d_idx, :], 2, 3)  # (n, M, L, K_d)
    directions, valid = zf_directions(h, cond_limit)
    scale = np.sqrt((l_ant - k_d) * stats.gamma[:, d_idx])  # (M, K_d)
    w_d = np.swapaxes(directions, 2, 3) * scale[None, :, :, None]
    return w_d, np.all(valid, axis=1)


def _mc_local_normalizer(
    stats: ChannelStats,
    grouping: Grouping,
    ap: int,
    num_antennas: int,
    n_draws: int,
    seed: int,
    cond_limit: float,
) -> np.ndarray:
    """Monte Carlo estimate of E{||G (G^H G)^-1 pi_j||^2} at one AP."""
    rng = derive_rng(seed, STREAM_NORMALIZER, ap)
    g_hat = draw_estimate_batch(stats, num_antennas, n_draws, rng)
    h = np.swapaxes(g_hat[:, ap, list(grouping.distributed), :], 1, 2)
    directions, valid = zf_directions(h, cond_limit)
    if not np.any(valid):
        raise SingularPrecoderError(f"no usable draw for the local normalizer at AP {ap}")
    return np.mean(np.sum(np.abs(directions[valid]) ** 2, axis=1), axis=0)
