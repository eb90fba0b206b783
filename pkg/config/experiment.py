"""Experiment definition loaded from a dotenv-style config file.

One ``HYBRIDFH_<FIELD>=<value>`` per line; list fields are JSON arrays, e.g.
``HYBRIDFH_FH_VALUES_GBPS=[4, 6, 8]``. Keyword overrides (CLI flags) win over the
file, which wins over defaults. See ``data/configs/`` for the shipped presets.
"""

import math
from pathlib import Path

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from config.settings import Settings
from src.models.enums import AllocMode, ExperimentMode, GroupingMethod, Objective, Scheme, SweepAxis
from src.models.experiment import SchemeSpec
from src.models.fronthaul import FronthaulParams
from src.models.system import SystemParams


class ExperimentConfig(BaseSettings):
    """Everything that defines one sweep experiment."""

    model_config = SettingsConfigDict(env_prefix="HYBRIDFH_", env_file_encoding="utf-8", extra="ignore")

    name: str = "experiment"

    # Network
    num_aps: int = Field(20, ge=1)
    num_users: int = Field(20, ge=1)
    num_antennas: int = Field(14, ge=1)
    area_side: float = Field(2000.0, gt=0)
    tau: int = 2000
    tau_u: int = 20
    rho: float = Field(1.0, gt=0)  # W
    rho_u: float = Field(0.5, gt=0)  # W
    noise_dbm: float = -92.0
    shadow_std_db: float = Field(8.0, ge=0)
    qos_c: float = Field(1.0, ge=0)  # bit/s/Hz
    qos_d: float = Field(1.0, ge=0)

    # Fronthaul (eCPRI)
    m_order: int = 64
    n_subcarrier: int = 3264
    n_ofdm: int = 14
    ecpri_eff: float = 0.85
    delay_data: float = 5e-4
    delay_pr: float = 2e-4
    n_bits: int = 16
    n_gran: int = 136

    # Sweep
    sweep: SweepAxis = SweepAxis.FH
    fh_values_gbps: list[float] = [4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0]
    l_values: list[int] = [8, 10, 12, 14, 16]
    fh_max_gbps: float = Field(8.0, ge=0)  # fixed FH_max of an L sweep
    include_no_fh: bool = False

    # Compared schemes
    schemes: list[Scheme] = [Scheme.HYBRID, Scheme.CENTRALIZED, Scheme.DISTRIBUTED]
    grouping_methods: list[GroupingMethod] = [GroupingMethod.KMEANS]
    alloc_modes: list[AllocMode] = [AllocMode.OPA]
    mode: ExperimentMode = ExperimentMode.CAPACITY_LIMITED
    objective: Objective = Objective.GEOMEAN
    full_opa_sweep: bool = False
    fig3_kmax_compat: bool = False

    # Monte Carlo
    n_drops: int = Field(50, ge=1)
    n_mu_draws: int = Field(300, ge=1)
    n_oracle_draws: int = Field(0, ge=0)  # 0 disables the per-drop oracle check
    seed: int = Field(0, ge=0)

    # Output; unset means <hybridfh_output_dir>/<name>
    output_dir: str | None = None
    record_timing: bool = True

    @model_validator(mode="after")
    def _check(self) -> "ExperimentConfig":
        if self.sweep == SweepAxis.FH and not (self.fh_values_gbps or self.include_no_fh):
            raise ValueError("fh_values_gbps must not be empty for an FH sweep")
        if self.sweep == SweepAxis.L and not self.l_values:
            raise ValueError("l_values must not be empty for an L sweep")
        if any(v < 0 for v in self.fh_values_gbps):
            raise ValueError("fh_values_gbps must be >= 0")
        if any(v < 1 for v in self.l_values):
            raise ValueError("l_values must be >= 1")
        if not self.schemes or not self.grouping_methods or not self.alloc_modes:
            raise ValueError("schemes, grouping_methods and alloc_modes must not be empty")
        # surfaces SystemParams / FronthaulParams validation as a config error
        self.system_params()
        self.fronthaul_params()
        return self

    def system_params(self, num_antennas: int | None = None, fh_max: float | None = None) -> SystemParams:
        """SystemParams of one sweep point (FH_max in bit/s)."""
        return SystemParams(
            num_aps=self.num_aps,
            num_users=self.num_users,
            num_antennas=num_antennas or self.num_antennas,
            area_side=self.area_side,
            tau=self.tau,
            tau_u=self.tau_u,
            rho=self.rho,
            rho_u=self.rho_u,
            noise_dbm=self.noise_dbm,
            qos_c=self.qos_c,
            qos_d=self.qos_d,
            fh_max=self.fh_max_gbps * 1e9 if fh_max is None else fh_max,
        )

    def fronthaul_params(self, num_antennas: int | None = None) -> FronthaulParams:
        return FronthaulParams(
            m_order=self.m_order,
            n_subcarrier=self.n_subcarrier,
            n_ofdm=self.n_ofdm,
            ecpri_eff=self.ecpri_eff,
            delay_data=self.delay_data,
            delay_pr=self.delay_pr,
            n_bits=self.n_bits,
            n_gran=self.n_gran,
            num_antennas=num_antennas or self.num_antennas,
        )

    def results_dir(self, settings: Settings) -> Path:
        """Directory the CSVs go to."""
        if self.output_dir:
            return Path(self.output_dir)
        return settings.output_dir / self.name

    def sweep_points(self) -> list[float]:
        """Sweep values as written to the CSVs: FH_max in Gbps (inf for no limit) or L."""
        if self.sweep == SweepAxis.L:
            return [float(v) for v in self.l_values]
        points = [float(v) for v in self.fh_values_gbps]
        if self.include_no_fh:
            points.append(math.inf)
        return points

    def point_params(self, sweep_value: float) -> tuple[SystemParams, FronthaulParams]:
        """System and fronthaul parameters of one sweep point."""
        if self.sweep == SweepAxis.L:
            l_ant = int(sweep_value)
            return self.system_params(num_antennas=l_ant), self.fronthaul_params(num_antennas=l_ant)
        return self.system_params(fh_max=sweep_value * 1e9), self.fronthaul_params()

    def scheme_specs(self) -> list[SchemeSpec]:
        """Compared curves; the distributed scheme ranks users by total gain, so it runs once per alloc."""
        specs: list[SchemeSpec] = []
        for scheme in self.schemes:
            methods = [GroupingMethod.LSF] if scheme == Scheme.DISTRIBUTED else self.grouping_methods
            for alloc in self.alloc_modes:
                for method in methods:
                    spec = SchemeSpec(scheme=scheme, method=method, alloc=alloc)
                    if spec not in specs:
                        specs.append(spec)
        return specs


def load_experiment_config(path: str | Path | None = None, **overrides) -> ExperimentConfig:
    """Load a config file and apply keyword overrides (``None`` values are ignored).

    Raises:
        FileNotFoundError: ``path`` does not exist.
        pydantic.ValidationError: A value is invalid.
    """
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if path is None:
        return ExperimentConfig(**overrides)
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return ExperimentConfig(_env_file=path, **overrides)
