"""Experiment result data models."""

import math
from dataclasses import asdict, dataclass, fields

from src.models.enums import AllocMode, GroupingMethod, Scheme


@dataclass(frozen=True)
class SchemeSpec:
    """One compared curve: precoding scheme, grouping method and power allocation."""

    scheme: Scheme
    method: GroupingMethod
    alloc: AllocMode

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "method", GroupingMethod(self.method))
        object.__setattr__(self, "alloc", AllocMode(self.alloc))

    @property
    def label(self) -> str:
        return f"{self.scheme.value}-{self.alloc.value}-{self.method.value}"


@dataclass
class DropResult:
    """One row of the per-drop CSV."""

    sweep_value: float
    drop_id: int
    scheme: str
    grouping_method: str
    alloc: str
    K_c: int
    K_d: int
    sum_se: float
    min_user_se: float
    feasible: bool
    fh_used_max_ap: float  # bit/s
    sca_iters: int
    wall_time_ms: float

    def __post_init__(self):
        if self.drop_id < 0:
            raise ValueError("drop_id must be >= 0")
        if self.K_c < 0 or self.K_d < 0:
            raise ValueError("K_c and K_d must be >= 0")
        if self.sum_se < 0 or math.isnan(self.sum_se):
            raise ValueError(f"sum_se must be a non-negative number, got {self.sum_se}")

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_row(self) -> dict:
        return asdict(self)


@dataclass
class AggregateRow:
    """Mean over drops for one (sweep point, scheme) pair."""

    sweep_value: float
    scheme: str
    grouping_method: str
    alloc: str
    n_drops: int
    mean_sum_se: float
    mean_min_user_se: float
    feasible_fraction: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_row(self) -> dict:
        return asdict(self)


@dataclass
class OracleRow:
    """Closed-form vs Monte Carlo comparison of one selected allocation."""

    sweep_value: float
    drop_id: int
    scheme: str
    grouping_method: str
    alloc: str
    sum_se: float
    oracle_sum_se: float
    max_rel_sinr_error: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_row(self) -> dict:
        return asdict(self)


@dataclass
class ComplexityRow:
    """Precoding cost and precoding-weight fronthaul load of one scheme."""

    sweep_value: float
    scheme: str
    k_c: int
    k_d: int
    complexity: str
    operations: int
    fh_pr: float  # bit/s
    fh_data: float  # bit/s

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_row(self) -> dict:
        return asdict(self)
