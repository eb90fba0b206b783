"""eCPRI fronthaul parameter data model."""

from dataclasses import dataclass


@dataclass(frozen=True)
class FronthaulParams:
    """Inputs of the data (alpha1) and precoding-weight (alpha2) bit-rate formulas."""

    m_order: int = 64
    n_subcarrier: int = 3264
    n_ofdm: int = 14
    ecpri_eff: float = 0.85
    delay_data: float = 5e-4  # seconds
    delay_pr: float = 2e-4  # seconds
    n_bits: int = 16
    n_gran: int = 136
    num_antennas: int = 14

    def __post_init__(self):
        if self.m_order < 2 or self.m_order & (self.m_order - 1):
            raise ValueError(f"m_order must be a power of 2 >= 2, got {self.m_order}")
        if not 0 < self.ecpri_eff <= 1:
            raise ValueError(f"ecpri_eff must be in (0, 1], got {self.ecpri_eff}")
        for name in ("n_subcarrier", "n_ofdm", "delay_data", "delay_pr", "n_bits", "n_gran", "num_antennas"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
