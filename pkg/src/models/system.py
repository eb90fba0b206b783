"""System parameter and network drop data models."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SystemParams:
    """Network dimensions, coherence budget, powers and QoS targets.

    Powers are in watts; large-scale gains downstream are divided by the noise
    power in watts, so the noise term in every SINR is exactly 1.
    """

    num_aps: int
    num_users: int
    num_antennas: int
    area_side: float = 2000.0
    tau: int = 2000
    tau_u: int = 20
    rho: float = 1.0
    rho_u: float = 0.5
    noise_dbm: float = -92.0
    qos_c: float = 1.0
    qos_d: float = 1.0
    fh_max: float = math.inf  # bit/s

    def __post_init__(self):
        if self.num_aps < 1 or self.num_users < 1 or self.num_antennas < 1:
            raise ValueError("num_aps, num_users and num_antennas must be >= 1")
        if self.tau_u < self.num_users:
            raise ValueError(
                f"tau_u must be >= num_users for orthogonal pilots, got tau_u={self.tau_u}, K={self.num_users}"
            )
        if not self.tau_u < self.tau:
            raise ValueError(f"tau_u must be < tau, got tau_u={self.tau_u}, tau={self.tau}")
        if self.rho <= 0 or self.rho_u <= 0:
            raise ValueError("rho and rho_u must be > 0")
        if self.area_side <= 0:
            raise ValueError("area_side must be > 0")
        if self.qos_c < 0 or self.qos_d < 0:
            raise ValueError("qos_c and qos_d must be >= 0")
        if self.fh_max < 0:
            raise ValueError("fh_max must be >= 0")

    @property
    def prelog(self) -> float:
        """Fraction of the coherence interval left for downlink data."""
        return 1.0 - self.tau_u / self.tau

    @property
    def noise_w(self) -> float:
        return 10 ** ((self.noise_dbm - 30.0) / 10.0)


@dataclass(frozen=True, eq=False)
class Scenario:
    """One random drop: AP/user geometry and the M x K large-scale gains."""

    params: SystemParams
    ap_positions: np.ndarray  # (M, 2) meters
    user_positions: np.ndarray  # (K, 2) meters
    beta: np.ndarray  # (M, K) linear, noise-normalized
    path_loss_db: np.ndarray  # (M, K) unshadowed path loss (gain, dB)

    def __post_init__(self):
        m, k = self.params.num_aps, self.params.num_users
        if self.ap_positions.shape != (m, 2):
            raise ValueError(f"ap_positions must have shape ({m}, 2), got {self.ap_positions.shape}")
        if self.user_positions.shape != (k, 2):
            raise ValueError(f"user_positions must have shape ({k}, 2), got {self.user_positions.shape}")
        if self.beta.shape != (m, k):
            raise ValueError(f"beta must have shape ({m}, {k}), got {self.beta.shape}")
        if not np.all(self.beta > 0):
            raise ValueError("beta must be strictly positive")
        side = self.params.area_side
        for name, pos in (("ap_positions", self.ap_positions), ("user_positions", self.user_positions)):
            if np.any(pos < 0) or np.any(pos >= side):
                raise ValueError(f"{name} must lie inside [0, {side})^2")
