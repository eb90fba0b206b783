"""eCPRI fronthaul accounting.

Every AP receives the data symbols of all served users (alpha1 bit/s each) and,
for centralized users, the quantized precoding weights (alpha2 bit/s each):

    FH_m = K_c * alpha2 + (K_c + K_d) * alpha1 <= FH_max

All rates are in bit/s; comparisons allow 1 bit/s of floating-point slack.
"""

import math

import numpy as np

from src.models.fronthaul import FronthaulParams

FH_TOLERANCE = 1.0  # bit/s


def alpha1(fp: FronthaulParams) -> float:
    """Data rate per served user: log2(M_order) N_sub N_OFDM / (eff * delay_data)."""
    bits_per_symbol = int(fp.m_order).bit_length() - 1
    return bits_per_symbol * fp.n_subcarrier * fp.n_ofdm / (fp.ecpri_eff * fp.delay_data)


def alpha2(fp: FronthaulParams) -> float:
    """Precoding-weight rate per centralized user: 2 L N_bits N_gran / (eff * delay_pr)."""
    return 2 * fp.num_antennas * fp.n_bits * fp.n_gran / (fp.ecpri_eff * fp.delay_pr)


def fh_data(k_c: int, k_d: int, fp: FronthaulParams) -> float:
    return (k_c + k_d) * alpha1(fp)


def fh_precoding(k_c: int, fp: FronthaulParams) -> float:
    return k_c * alpha2(fp)


def fh_usage(k_c: int, k_d: int, fp: FronthaulParams) -> float:
    """Per-AP fronthaul load in bit/s (identical at every AP)."""
    return fh_precoding(k_c, fp) + fh_data(k_c, k_d, fp)


def fh_usage_per_ap(k_c: int, k_d: int, fp: FronthaulParams, num_aps: int) -> np.ndarray:
    return np.full(num_aps, fh_usage(k_c, k_d, fp))


def check_constraint(k_c: int, k_d: int, fp: FronthaulParams, fh_max: float) -> bool:
    """True iff K_c alpha2 + (K_c + K_d) alpha1 <= fh_max."""
    if k_c < 0 or k_d < 0:
        raise ValueError("group sizes must be >= 0")
    return fh_usage(k_c, k_d, fp) <= fh_max + FH_TOLERANCE


def _fit_count(budget: float, cost: float) -> int:
    """Largest n with n * cost <= budget (may be negative when budget < 0)."""
    if math.isinf(budget):
        return 2**31 - 1
    if cost <= 0:
        return 2**31 - 1 if budget >= -FH_TOLERANCE else -1
    return math.floor((budget + FH_TOLERANCE) / cost)


def max_group_sizes(
    fp: FronthaulParams,
    fh_max: float,
    num_antennas: int,
    num_aps: int,
    num_users: int,
) -> tuple[int, int]:
    """Pure-scheme group caps.

    Returns:
        (k_max_c, k_max_d) with
        k_max_c = min(floor(fh_max / (alpha1 + alpha2)), M L, K) and
        k_max_d = min(floor(fh_max / alpha1), L - 1, K).
    """
    a1, a2 = alpha1(fp), alpha2(fp)
    k_max_c = min(max(_fit_count(fh_max, a1 + a2), 0), num_aps * num_antennas, num_users)
    k_max_d = min(max(_fit_count(fh_max, a1), 0), num_antennas - 1, num_users)
    return k_max_c, k_max_d


def max_distributed(k_c: int, fp: FronthaulParams, fh_max: float, num_antennas: int, num_users: int) -> int:
    """Largest K_d that fits next to ``k_c`` centralized users, or -1 if even K_d = 0 does not."""
    remaining = fh_max - k_c * (alpha1(fp) + alpha2(fp))
    fit = _fit_count(remaining, alpha1(fp))
    if fit < 0:
        return -1
    return min(fit, num_antennas - 1, num_users - k_c)


def serve_all_max_centralized(
    fp: FronthaulParams,
    fh_max: float,
    num_users: int,
    num_aps: int,
    num_antennas: int,
    swapped_rates: bool = False,
) -> int:
    """Largest K_c when all K users must be served.

    Solving the constraint with K_c + K_d = K gives floor((FH_max - K alpha1) / alpha2).
    ``swapped_rates`` evaluates floor((FH_max - K alpha2) / alpha1) instead.
    A negative result means no K_c fits.
    """
    a1, a2 = alpha1(fp), alpha2(fp)
    if swapped_rates:
        a1, a2 = a2, a1
    fit = _fit_count(fh_max - num_users * a1, a2)
    return min(fit, num_users, num_aps * num_antennas)
