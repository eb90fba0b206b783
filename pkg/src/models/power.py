"""Power allocation and precoder data models."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class PowerAllocation:
    """Power control coefficients.

    ``eta_c`` has one entry per centralized user (shared by all APs);
    ``eta_d`` is M x K_d, one entry per AP and distributed user.
    """

    eta_c: np.ndarray
    eta_d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eta_c", np.asarray(self.eta_c, dtype=float).reshape(-1))
        object.__setattr__(self, "eta_d", np.asarray(self.eta_d, dtype=float))
        if self.eta_d.ndim != 2:
            raise ValueError(f"eta_d must be an M x K_d matrix, got shape {self.eta_d.shape}")
        if np.any(self.eta_c < 0) or np.any(self.eta_d < 0):
            raise ValueError("power coefficients must be >= 0")

    @classmethod
    def zeros(cls, num_aps: int, k_c: int, k_d: int) -> "PowerAllocation":
        return cls(eta_c=np.zeros(k_c), eta_d=np.zeros((num_aps, k_d)))

    def ap_load(self, mu: np.ndarray) -> np.ndarray:
        """Expected transmit power per AP: sum_c eta_c mu_mk + sum_d eta_mk."""
        load = self.eta_d.sum(axis=1)
        if self.eta_c.size:
            load = load + mu @ self.eta_c
        return load

    def scaled(self, factor: float) -> "PowerAllocation":
        return PowerAllocation(eta_c=self.eta_c * factor, eta_d=self.eta_d * factor)


@dataclass(frozen=True, eq=False)
class PrecoderSet:
    """Hybrid precoders of one realization.

    ``w_c`` is (M, K_c, L) centralized ZF, ``w_d`` is (M, K_d, L) normalized local
    ZF, ``mu`` the M x K_c power statistic of the centralized precoders.
    """

    w_c: np.ndarray
    w_d: np.ndarray
    mu: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))


@dataclass(frozen=True, eq=False)
class ScaState:
    """Expansion point of one SCA iteration.

    ``t_c``/``t_d`` are the SINR targets at the point (the exact SINRs of ``alloc``
    once the point has been tightened). The linearization anchors are
    ``v[t, i] = t_c[i] - eta_c[t]``, ``z[m, t, i] = t_c[i] - eta_d[m, t]`` and
    ``q[j]``, the tangent slope of the distributed-user bound.
    """

    iteration: int
    alloc: PowerAllocation
    t_c: np.ndarray
    t_d: np.ndarray
    objective: float
    v: np.ndarray
    z: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.v)) and np.all(np.isfinite(self.z)) and np.all(np.isfinite(self.q))):
            raise ValueError("SCA expansion points must be finite")
