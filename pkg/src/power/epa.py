"""Equal power allocation baseline."""

import numpy as np

from src.models.channel import ChannelStats
from src.models.grouping import Grouping
from src.models.power import PowerAllocation
from src.models.system import SystemParams


def epa(stats: ChannelStats, grouping: Grouping, mu: np.ndarray | None, params: SystemParams) -> PowerAllocation:
    """One coefficient c for every eta, with the most loaded AP at exactly rho.

    c = rho / max_m (sum_{k in K_c} mu_mk + |K_d|)
    """
    m = stats.num_aps
    if grouping.k_c == 0 and grouping.k_d == 0:
        return PowerAllocation.zeros(m, 0, 0)
    load = np.full(m, float(grouping.k_d))
    if grouping.k_c:
        load = load + np.asarray(mu).sum(axis=1)
    c = params.rho / float(np.max(load))
    return PowerAllocation(eta_c=np.full(grouping.k_c, c), eta_d=np.full((m, grouping.k_d), c))
