"""Precoding complexity and fronthaul accounting per scheme."""

from config.experiment import ExperimentConfig
from src.fronthaul.ecpri import fh_data, fh_precoding, max_distributed, max_group_sizes
from src.models.enums import Scheme
from src.models.experiment import ComplexityRow


def centralized_ops(num_aps: int, num_antennas: int, k: int) -> int:
    """O(M L K^2 + K^3): Gram matrix of the stacked estimate plus its inverse."""
    return num_aps * num_antennas * k**2 + k**3


def local_ops(num_antennas: int, k: int) -> int:
    """O(L K^2 + K^3) per AP."""
    return num_antennas * k**2 + k**3


def complexity_report(config: ExperimentConfig, k_c: int | None = None) -> list[ComplexityRow]:
    """Complexity and FH_{m,pr} of Hybrid, Centralized and Distributed at every sweep point.

    Args:
        config: Experiment definition (sweep points give L and FH_max).
        k_c: Hybrid centralized group size; defaults to the fronthaul maximum at
            each point, with K_d the largest group that still fits.

    Returns:
        Three rows per sweep point. Pure schemes are costed for all K users.
    """
    rows: list[ComplexityRow] = []
    for value in config.sweep_points():
        params, fp = config.point_params(value)
        m, k, l_ant = params.num_aps, params.num_users, params.num_antennas
        hybrid_c = k_c if k_c is not None else max_group_sizes(fp, params.fh_max, l_ant, m, k)[0]
        hybrid_d = max(max_distributed(hybrid_c, fp, params.fh_max, l_ant, k), 0)

        rows.append(ComplexityRow(
            sweep_value=value,
            scheme=Scheme.HYBRID.value,
            k_c=hybrid_c,
            k_d=hybrid_d,
            complexity="O(MLK_c^2 + K_c^3) + O(LK_d^2 + K_d^3)",
            operations=centralized_ops(m, l_ant, hybrid_c) + local_ops(l_ant, hybrid_d),
            fh_pr=fh_precoding(hybrid_c, fp),
            fh_data=fh_data(hybrid_c, hybrid_d, fp),
        ))
        rows.append(ComplexityRow(
            sweep_value=value,
            scheme=Scheme.CENTRALIZED.value,
            k_c=k,
            k_d=0,
            complexity="O(MLK^2 + K^3)",
            operations=centralized_ops(m, l_ant, k),
            fh_pr=fh_precoding(k, fp),
            fh_data=fh_data(k, 0, fp),
        ))
        rows.append(ComplexityRow(
            sweep_value=value,
            scheme=Scheme.DISTRIBUTED.value,
            k_c=0,
            k_d=k,
            complexity="O(LK^2 + K^3)",
            operations=local_ops(l_ant, k),
            fh_pr=0.0,
            fh_data=fh_data(0, k, fp),
        ))
    return rows
