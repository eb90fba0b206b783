"""Closed-form use-and-then-forget SINR and spectral efficiency.

Everything here is a function of large-scale quantities only (beta, gamma, mu and
the power coefficients); per-realization SINRs live in ``src.evaluation.oracle``.
All gains are noise-normalized, so the noise term is 1.
"""

import logging

import numpy as np

from src.fronthaul.ecpri import check_constraint, fh_usage_per_ap
from src.models.channel import ChannelStats
from src.models.errors import GroupSizeError
from src.models.fronthaul import FronthaulParams
from src.models.grouping import Grouping
from src.models.power import PowerAllocation
from src.models.report import SEReport
from src.models.system import SystemParams

logger = logging.getLogger(__name__)

POWER_SLACK = 1e-6  # relative
QOS_SLACK = 1e-6  # bit/s/Hz


def _check_shapes(stats: ChannelStats, grouping: Grouping, mu: np.ndarray | None, alloc: PowerAllocation) -> None:
    m = stats.num_aps
    if alloc.eta_c.shape != (grouping.k_c,):
        raise ValueError(f"eta_c must have {grouping.k_c} entries, got {alloc.eta_c.shape}")
    if alloc.eta_d.shape != (m, grouping.k_d):
        raise ValueError(f"eta_d must have shape ({m}, {grouping.k_d}), got {alloc.eta_d.shape}")
    if mu is not None and grouping.k_c and np.shape(mu) != (m, grouping.k_c):
        raise ValueError(f"mu must have shape ({m}, {grouping.k_c}), got {np.shape(mu)}")


def centralized_sinrs(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    alloc: PowerAllocation,
) -> np.ndarray:
    """SINR of every centralized user, in ``grouping.centralized`` order.

    eta_k / (sum_t eta_t u_tk + sum_{t in K_d} sum_m eta_mt beta_mk + 1),
    u_tk = sum_m mu_mt (beta_mk - gamma_mk).
    """
    _check_shapes(stats, grouping, mu, alloc)
    if grouping.k_c == 0:
        return np.zeros(0)
    c_idx = list(grouping.centralized)
    err_c = stats.error_variance[:, c_idx]  # (M, K_c)
    u = mu.T @ err_c  # u[t, k]
    interference = alloc.eta_c @ u + alloc.eta_d.sum(axis=1) @ stats.beta[:, c_idx]
    return alloc.eta_c / (interference + 1.0)


def distributed_sinrs(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray | None,
    alloc: PowerAllocation,
    num_antennas: int,
) -> np.ndarray:
    """SINR of every distributed user, in ``grouping.distributed`` order.

    (L - K_d) (sum_m sqrt(eta_mk gamma_mk))^2 /
    (sum_{t in K_c} eta_t sum_m mu_mt beta_mk + sum_{t in K_d} sum_m eta_mt (beta_mk - gamma_mk) + 1)

    Raises:
        GroupSizeError: L <= K_d.
    """
    amplitude, denominator = distributed_sinr_terms(stats, grouping, mu, alloc, num_antennas)
    return amplitude**2 / denominator


def distributed_sinr_terms(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray | None,
    alloc: PowerAllocation,
    num_antennas: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Split the distributed SINR into its amplitude and denominator.

    Returns:
        (x, d) with x = sum_m sqrt((L - K_d) eta_mk gamma_mk) and d the
        interference-plus-noise term, so SINR = x^2 / d.
    """
    _check_shapes(stats, grouping, mu, alloc)
    k_d = grouping.k_d
    if k_d == 0:
        return np.zeros(0), np.ones(0)
    if num_antennas <= k_d:
        raise GroupSizeError(f"distributed SINR needs L > K_d, got L={num_antennas}, K_d={k_d}")
    d_idx = list(grouping.distributed)
    gamma_d = stats.gamma[:, d_idx]
    amplitude = np.sqrt(num_antennas - k_d) * np.sum(np.sqrt(alloc.eta_d * gamma_d), axis=0)
    interference = alloc.eta_d.sum(axis=1) @ stats.error_variance[:, d_idx]
    if grouping.k_c:
        interference = interference + alloc.eta_c @ (mu.T @ stats.beta[:, d_idx])
    return amplitude, interference + 1.0


def sinr_centralized(k: int, stats: ChannelStats, grouping: Grouping, mu: np.ndarray, alloc: PowerAllocation) -> float:
    """SINR of centralized user ``k`` (a user index, not a position)."""
    if k not in grouping.centralized:
        raise ValueError(f"user {k} is not in the centralized group")
    return float(centralized_sinrs(stats, grouping, mu, alloc)[grouping.centralized.index(k)])


def sinr_distributed(
    k: int,
    stats: ChannelStats,
    grouping: Grouping,
    alloc: PowerAllocation,
    num_antennas: int,
    mu: np.ndarray | None = None,
) -> float:
    """SINR of distributed user ``k``; ``mu`` is required when K_c is non-empty."""
    if k not in grouping.distributed:
        raise ValueError(f"user {k} is not in the distributed group")
    if grouping.k_c and mu is None:
        raise ValueError("mu is required when the centralized group is non-empty")
    return float(distributed_sinrs(stats, grouping, mu, alloc, num_antennas)[grouping.distributed.index(k)])


def all_sinrs(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    alloc: PowerAllocation,
    num_antennas: int,
) -> np.ndarray:
    """SINRs of the served users, centralized first."""
    return np.concatenate([
        centralized_sinrs(stats, grouping, mu, alloc),
        distributed_sinrs(stats, grouping, mu, alloc, num_antennas),
    ])


def spectral_efficiency(sinr: np.ndarray, prelog: float) -> np.ndarray:
    """SE = prelog * log2(1 + SINR), bit/s/Hz."""
    return prelog * np.log2(1.0 + np.asarray(sinr, dtype=float))


def qos_sinr_threshold(qos_se: float, prelog: float) -> float:
    """Smallest SINR whose SE reaches ``qos_se``."""
    return float(2.0 ** (qos_se / prelog) - 1.0)


def sum_se(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    alloc: PowerAllocation,
    params: SystemParams,
    fp: FronthaulParams | None = None,
) -> SEReport:
    """Assemble the SE report of one allocation.

    Args:
        stats: Channel statistics of the drop.
        grouping: User grouping.
        mu: M x K_c centralized power statistic (ignored columns when K_c = 0).
        alloc: Power coefficients.
        params: System parameters (L, prelog, rho, QoS targets, FH_max).
        fp: Fronthaul parameters; without them the fronthaul check is skipped and
            ``fh_used`` is zero.

    Returns:
        SEReport whose ``feasible`` flag requires the QoS, per-AP power and
        fronthaul constraints to hold.
    """
    if mu is None or grouping.k_c == 0:
        mu = np.zeros((stats.num_aps, grouping.k_c))
    prelog = params.prelog
    sinr_c = centralized_sinrs(stats, grouping, mu, alloc)
    sinr_d = distributed_sinrs(stats, grouping, mu, alloc, params.num_antennas)
    se_c = spectral_efficiency(sinr_c, prelog)
    se_d = spectral_efficiency(sinr_d, prelog)

    qos_ok = bool(np.all(se_c >= params.qos_c - QOS_SLACK) and np.all(se_d >= params.qos_d - QOS_SLACK))
    load = alloc.ap_load(mu)
    power_ok = bool(np.all(load <= params.rho * (1.0 + POWER_SLACK)))

    if fp is not None:
        fh_used = fh_usage_per_ap(grouping.k_c, grouping.k_d, fp, stats.num_aps)
        fh_ok = check_constraint(grouping.k_c, grouping.k_d, fp, params.fh_max)
    else:
        fh_used = np.zeros(stats.num_aps)
        fh_ok = True

    se = np.concatenate([se_c, se_d])
    return SEReport(
        users=grouping.served,
        sinr=np.concatenate([sinr_c, sinr_d]),
        se=se,
        sum_se=float(np.sum(se)),
        prelog=prelog,
        feasible=qos_ok and power_ok and fh_ok,
        fh_used=fh_used,
        qos_ok=qos_ok,
        power_ok=power_ok,
        fh_ok=fh_ok,
    )
