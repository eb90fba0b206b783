"""Spectral efficiency report data model."""

from dataclasses import dataclass, field

import numpy as np

from src.models.grouping import Grouping
from src.models.power import PowerAllocation


@dataclass(frozen=True, eq=False)
class SEReport:
    """Closed-form SINR/SE of every served user plus constraint flags.

    Per-user arrays follow ``users`` (centralized users first, then distributed).
    """

    users: tuple[int, ...]
    sinr: np.ndarray
    se: np.ndarray
    sum_se: float
    prelog: float
    feasible: bool
    fh_used: np.ndarray  # bit/s per AP
    qos_ok: bool = True
    power_ok: bool = True
    fh_ok: bool = True
    qos_infeasible: bool = False  # set when the optimizer had to drop the QoS constraints
    solver_failed: bool = False  # set when the conic solver failed and an earlier point was kept

    def __post_init__(self):
        if len(self.users) != len(self.sinr) or len(self.sinr) != len(self.se):
            raise ValueError("users, sinr and se must have equal length")
        if self.prelog <= 0 or self.prelog > 1:
            raise ValueError(f"prelog must be in (0, 1], got {self.prelog}")

    @property
    def min_user_se(self) -> float:
        return float(np.min(self.se)) if len(self.se) else 0.0

    def se_of(self, user: int) -> float:
        return float(self.se[self.users.index(user)])


@dataclass(frozen=True, eq=False)
class OracleResult:
    """Monte Carlo use-and-then-forget estimates for one (grouping, allocation).

    Per-user arrays follow ``users`` (centralized first); ``mu`` is the oracle's own
    M x K_c estimate of E{||w_mk^c||^2}.
    """

    users: tuple[int, ...]
    sinr: np.ndarray
    desired_mean: np.ndarray  # |E{effective gain}|
    desired_var: np.ndarray
    desired_stderr: np.ndarray  # standard error of the mean effective gain
    interference: np.ndarray  # sum_{t != k} E{|gain_kt|^2}
    ap_power: np.ndarray  # E{||s_m||^2}, one per AP
    mu: np.ndarray
    n_draws: int
    n_skipped: int = 0


@dataclass(frozen=True)
class ScaTraceRow:
    """One line of the SCA trace: exact objective and worst per-AP power excess."""

    iter: int
    objective: float
    max_power_violation: float


@dataclass(frozen=True, eq=False)
class ScaResult:
    """Outcome of one SCA solve."""

    alloc: PowerAllocation
    report: SEReport
    trace: list[ScaTraceRow] = field(default_factory=list)
    converged: bool = False
    qos_infeasible: bool = False
    solver_failed: bool = False

    @property
    def iterations(self) -> int:
        return max(len(self.trace) - 1, 0)


@dataclass(frozen=True, eq=False)
class SelectionResult:
    """Grouping chosen for one scheme together with its allocation and report."""

    grouping: Grouping
    alloc: PowerAllocation
    report: SEReport
    sca_iters: int = 0
    trace: list[ScaTraceRow] = field(default_factory=list)
    candidates: int = 0
