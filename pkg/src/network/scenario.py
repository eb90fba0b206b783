"""Random network drops on a wrapped-around square area.

APs and users are placed uniformly; large-scale fading follows the three-slope
path-loss model with a Hata-COST231 constant and log-normal shadowing beyond the
second breakpoint.
"""

import logging
import math

import numpy as np

from src.models.system import Scenario, SystemParams
from src.network.seeding import STREAM_DROP, derive_rng

logger = logging.getLogger(__name__)

CARRIER_MHZ = 1900.0
AP_HEIGHT_M = 15.0
USER_HEIGHT_M = 1.65
D0_M = 10.0
D1_M = 50.0
D_MIN_M = 1.0
SHADOW_STD_DB = 8.0

# Hata-COST231 constant, dB
HATA_L = (
    46.3
    + 33.9 * math.log10(CARRIER_MHZ)
    - 13.82 * math.log10(AP_HEIGHT_M)
    - (1.1 * math.log10(CARRIER_MHZ) - 0.7) * USER_HEIGHT_M
    + (1.56 * math.log10(CARRIER_MHZ) - 0.8)
)

_IMAGE_SHIFTS = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)], dtype=float)


def wraparound_distance(p1, p2, area_side: float) -> float:
    """Torus distance: the minimum over the 9 shifted images of ``p2``."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    images = p2[None, :] + area_side * _IMAGE_SHIFTS
    return float(np.min(np.linalg.norm(images - p1[None, :], axis=1)))


def wraparound_distances(ap_positions: np.ndarray, user_positions: np.ndarray, area_side: float) -> np.ndarray:
    """M x K matrix of torus distances between APs and users."""
    # (M, 1, 1, 2) - (1, K, 9, 2)
    images = user_positions[:, None, :] + area_side * _IMAGE_SHIFTS[None, :, :]
    diff = ap_positions[:, None, None, :] - images[None, :, :, :]
    return np.min(np.linalg.norm(diff, axis=-1), axis=-1)


def path_loss_db(distance_m: np.ndarray) -> np.ndarray:
    """Three-slope path loss (as a gain in dB, i.e. negative) for distances in meters.

    Distances below ``D_MIN_M`` are clamped; the formula itself works in km.
    """
    d_km = np.maximum(np.asarray(distance_m, dtype=float), D_MIN_M) / 1000.0
    d0_km, d1_km = D0_M / 1000.0, D1_M / 1000.0
    far = -HATA_L - 35.0 * np.log10(d_km)
    mid = -HATA_L - 15.0 * math.log10(d1_km) - 20.0 * np.log10(d_km)
    near = -HATA_L - 15.0 * math.log10(d1_km) - 20.0 * math.log10(d0_km)
    return np.where(d_km > d1_km, far, np.where(d_km > d0_km, mid, near))


def generate_drop(
    params: SystemParams,
    seed: int,
    shadow_std_db: float = SHADOW_STD_DB,
    normalize: bool = True,
) -> Scenario:
    """Generate one network drop.

    Args:
        params: System parameters (validated at construction).
        seed: Drop seed; the same (params, seed) gives a bitwise-identical drop.
        shadow_std_db: Log-normal shadowing deviation, applied only beyond D1_M.
        normalize: Divide the gains by the noise power in watts.

    Returns:
        Scenario with positions and the M x K large-scale gain matrix.
    """
    rng = derive_rng(seed, STREAM_DROP)
    side = params.area_side
    ap_positions = rng.uniform(0.0, side, size=(params.num_aps, 2))
    user_positions = rng.uniform(0.0, side, size=(params.num_users, 2))
    shadow = rng.standard_normal((params.num_aps, params.num_users))

    distances = wraparound_distances(ap_positions, user_positions, side)
    pl_db = path_loss_db(distances)
    shadow_db = np.where(distances > D1_M, shadow_std_db * shadow, 0.0)
    beta = 10.0 ** ((pl_db + shadow_db) / 10.0)
    if normalize:
        beta = beta / params.noise_w

    logger.info(
        "Drop seed=%d: M=%d K=%d median beta=%.2f dB",
        seed, params.num_aps, params.num_users, 10 * np.log10(np.median(beta)),
    )
    return Scenario(
        params=params,
        ap_positions=ap_positions,
        user_positions=user_positions,
        beta=beta,
        path_loss_db=pl_db,
    )
