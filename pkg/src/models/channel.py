"""Channel statistics and channel realization data models."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ChannelStats:
    """Large-scale gains and MMSE estimate variances, both M x K and linear."""

    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        if self.beta.shape != self.gamma.shape or self.beta.ndim != 2:
            raise ValueError(
                f"beta and gamma must be matching M x K matrices, got {self.beta.shape} and {self.gamma.shape}"
            )
        if np.any(self.gamma < 0):
            raise ValueError("gamma must be >= 0")
        # gamma == beta is allowed: perfect-CSI injection in tests and verification runs
        if np.any(self.gamma > self.beta * (1 + 1e-12)):
            raise ValueError("gamma must not exceed beta")

    @property
    def num_aps(self) -> int:
        return self.beta.shape[0]

    @property
    def num_users(self) -> int:
        return self.beta.shape[1]

    @property
    def error_variance(self) -> np.ndarray:
        """Per-entry variance of the estimation error, beta - gamma."""
        return np.maximum(self.beta - self.gamma, 0.0)


@dataclass(frozen=True, eq=False)
class ChannelDraw:
    """One small-scale realization: true channels, estimates and errors.

    All arrays have shape (M, K, L); ``g == g_hat + g_err``.
    """

    g: np.ndarray
    g_hat: np.ndarray
    g_err: np.ndarray

    def __post_init__(self):
        if not (self.g.shape == self.g_hat.shape == self.g_err.shape) or self.g.ndim != 3:
            raise ValueError("g, g_hat and g_err must share one (M, K, L) shape")

    @property
    def num_antennas(self) -> int:
        return self.g.shape[2]
