"""User grouping data model."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Grouping:
    """Partition of (served) users into the centralized and distributed groups.

    Index lists are 0-based user indices; order defines the column order of the
    stacked estimates, precoders and power coefficients. Users in neither list
    are not served (fronthaul-limited drops).
    """

    centralized: tuple[int, ...] = ()
    distributed: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "centralized", tuple(int(k) for k in self.centralized))
        object.__setattr__(self, "distributed", tuple(int(k) for k in self.distributed))
        if len(set(self.centralized)) != len(self.centralized):
            raise ValueError("centralized contains duplicate users")
        if len(set(self.distributed)) != len(self.distributed):
            raise ValueError("distributed contains duplicate users")
        if set(self.centralized) & set(self.distributed):
            raise ValueError("centralized and distributed groups must be disjoint")
        if any(k < 0 for k in self.centralized + self.distributed):
            raise ValueError("user indices must be >= 0")

    @property
    def k_c(self) -> int:
        return len(self.centralized)

    @property
    def k_d(self) -> int:
        return len(self.distributed)

    @property
    def served(self) -> tuple[int, ...]:
        """Served users, centralized first."""
        return self.centralized + self.distributed

    def validate_for(self, num_aps: int, num_users: int, num_antennas: int) -> None:
        """Check the rank caps: K_c <= M*L, K_d <= L - 1, indices < K."""
        if any(k >= num_users for k in self.served):
            raise ValueError(f"user index out of range for K={num_users}")
        if self.k_c > num_aps * num_antennas:
            raise ValueError(f"K_c={self.k_c} exceeds M*L={num_aps * num_antennas}")
        if self.k_d > num_antennas - 1:
            raise ValueError(f"K_d={self.k_d} exceeds L-1={num_antennas - 1}")
