"""Convex inner approximation of the SINR-target power control problem.

The SINR constraints SINR_k >= t_k are non-convex. Around an expansion point they
are replaced by convex constraints that imply them:

* centralized users: eta_k >= t_k (sum_t u_tk eta_t + sum_{m, t in K_d} beta_mk eta_mt + 1)
  with every bilinear term written as 4xy = (x + y)^2 - (x - y)^2 and the
  subtracted square lower-bounded by its tangent x^2 >= x0 (2x - x0);
* distributed users: x^2 / t >= q (2x - q t) with q = x0 / t0, where
  x = sum_m sqrt((L - K_d) eta_mk gamma_mk) is concave in eta.

Both surrogates are tight at the expansion point, so any feasible point of the
convex program is feasible for the original constraints. The program is a cvxpy
``Problem`` and can be handed to any conic solver that accepts second-order cones.

Gains span many orders of magnitude on realistic drops. The variables are
scaled (centralized powers by rho / max_m mu_mk, distributed powers by
rho), and every SINR row is divided by its value at the expansion point.
"""

from dataclasses import dataclass
from enum import Enum

import cvxpy as cp
import numpy as np

from src.evaluation.spectral_efficiency import (
    centralized_sinrs,
    distributed_sinr_terms,
    qos_sinr_threshold,
)
from src.models.channel import ChannelStats
from src.models.grouping import Grouping
from src.models.power import PowerAllocation, ScaState
from src.models.system import SystemParams

AMPLITUDE_FLOOR = 1e-12
ROW_FLOOR = 1e-6  # relative to the variable scale


class Focus(str, Enum):
    """Which SINR targets the subproblem maximizes."""

    ALL = "all"
    CENTRALIZED = "centralized"
    DISTRIBUTED = "distributed"


@dataclass(eq=False)
class Subproblem:
    """A built convex program together with handles on its variables."""

    problem: cp.Problem
    x_c: cp.Variable | None
    eta_c_scale: np.ndarray
    y_d: cp.Variable | None
    eta_d_scale: float
    t_c: cp.Variable | None
    t_d: cp.Variable | None

    def allocation(self, mu: np.ndarray, rho: float) -> PowerAllocation:
        """Read the solution back, clipped to eta >= 0 and to the per-AP budget."""
        num_aps = mu.shape[0] if self.y_d is None else self.y_d.shape[0]
        eta_c = np.zeros(0) if self.x_c is None else np.maximum(self.eta_c_scale * self.x_c.value, 0.0)
        eta_d = np.zeros((num_aps, 0)) if self.y_d is None else np.maximum(self.eta_d_scale * self.y_d.value, 0.0)
        alloc = PowerAllocation(eta_c=eta_c, eta_d=eta_d)
        peak = float(np.max(alloc.ap_load(mu), initial=0.0))
        if peak > rho:
            alloc = alloc.scaled(rho / peak)
        return alloc


def tighten(
    alloc: PowerAllocation,
    iteration: int,
    objective: float,
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    params: SystemParams,
) -> ScaState:
    """Expansion point at ``alloc`` with the SINR targets set to the exact SINRs."""
    t_c = centralized_sinrs(stats, grouping, mu, alloc)
    amplitude, denominator = distributed_sinr_terms(stats, grouping, mu, alloc, params.num_antennas)
    t_d = amplitude**2 / denominator
    # q = x0 / t0 = d0 / x0 at a tight point
    q = denominator / np.maximum(amplitude, AMPLITUDE_FLOOR)
    v = t_c[None, :] - alloc.eta_c[:, None]
    z = t_c[None, None, :] - alloc.eta_d[:, :, None]
    return ScaState(
        iteration=iteration,
        alloc=alloc,
        t_c=t_c,
        t_d=t_d,
        objective=objective,
        v=v,
        z=z,
        q=q,
    )


def build_subproblem(
    state: ScaState,
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    params: SystemParams,
    qos: bool = True,
    focus: Focus = Focus.ALL,
) -> Subproblem:
    """Build the convex program around ``state``.

    Args:
        state: Expansion point.
        stats: Channel statistics.
        grouping: User grouping; at least one group must be non-empty.
        mu: M x K_c centralized power statistic.
        params: System parameters (L, rho, QoS targets, prelog).
        qos: Include the per-user minimum-SE constraints.
        focus: ``ALL`` maximizes the geometric mean of (1 + t) over every served
            user. ``CENTRALIZED``/``DISTRIBUTED`` maximize one group and keep the
            other group's targets at their current values.

    Returns:
        Subproblem ready to be solved.
    """
    m = stats.num_aps
    k_c, k_d = grouping.k_c, grouping.k_d
    if k_c == 0 and k_d == 0:
        raise ValueError("cannot build a power control problem without served users")
    c_idx, d_idx = list(grouping.centralized), list(grouping.distributed)
    beta, gamma, err = stats.beta, stats.gamma, stats.error_variance
    constraints = []
    load_terms = []

    x_c = eta_c = t_c = None
    eta_c_scale = np.zeros(0)
    if k_c:
        # x_c in [0, 1] spans every eta_c a single AP could afford
        eta_c_scale = params.rho / np.max(mu, axis=0)
        x_c = cp.Variable(k_c, nonneg=True, name="x_c")
        eta_c = cp.multiply(eta_c_scale, x_c)
        t_c = cp.Variable(k_c, nonneg=True, name="t_c")
        load_terms.append((mu @ eta_c) / params.rho)

    y_d = eta_d = t_d = None
    if k_d:
        y_d = cp.Variable((m, k_d), nonneg=True, name="y_d")
        eta_d = params.rho * y_d
        t_d = cp.Variable(k_d, nonneg=True, name="t_d")
        load_terms.append(cp.sum(y_d, axis=1))

    # per-AP budget in units of rho
    constraints.append(sum(load_terms) <= 1.0)

    if k_c:
        u = mu.T @ err[:, c_idx]  # u[t, i]
        for i, k in enumerate(c_idx):
            v0 = state.v[:, i]
            rhs = cp.sum(cp.multiply(u[:, i], cp.square(t_c[i] + eta_c) - cp.multiply(v0, 2 * (t_c[i] - eta_c) - v0)))
            if k_d:
                z0 = state.z[:, :, i]
                weight = np.repeat(beta[:, k][:, None], k_d, axis=1)
                rhs = rhs + cp.sum(
                    cp.multiply(weight, cp.square(t_c[i] + eta_d) - cp.multiply(z0, 2 * (t_c[i] - eta_d) - z0))
                )
            row = 1.0 / (4.0 * max(float(state.alloc.eta_c[i]), ROW_FLOOR * float(eta_c_scale[i])))
            constraints.append(row * 4 * eta_c[i] >= row * (rhs + 4 * t_c[i]))

    if k_d:
        _, denominator0 = distributed_sinr_terms(stats, grouping, mu, state.alloc, params.num_antennas)
        for j, k in enumerate(d_idx):
            gain = np.sqrt((params.num_antennas - k_d) * gamma[:, k])
            amplitude = cp.sum(cp.multiply(gain, cp.sqrt(eta_d[:, j])))
            q = float(state.q[j])
            row = 1.0 / float(denominator0[j])
            rhs = cp.sum(err[:, k] @ eta_d) + 1.0
            if k_c:
                rhs = rhs + (mu.T @ beta[:, k]) @ eta_c
            constraints.append(row * q * (2 * amplitude - q * t_d[j]) >= row * rhs)

    if qos:
        if k_c:
            constraints.append(t_c >= qos_sinr_threshold(params.qos_c, params.prelog))
        if k_d:
            constraints.append(t_d >= qos_sinr_threshold(params.qos_d, params.prelog))

    if focus == Focus.CENTRALIZED and k_c:
        targets = [t_c]
        if k_d:
            constraints.append(t_d >= state.t_d)
    elif focus == Focus.DISTRIBUTED and k_d:
        targets = [t_d]
        if k_c:
            constraints.append(t_c >= state.t_c)
    else:
        targets = [t for t in (t_c, t_d) if t is not None]

    objective = cp.Maximize(cp.geo_mean(cp.hstack([1 + t for t in targets])))
    return Subproblem(
        problem=cp.Problem(objective, constraints),
        x_c=x_c,
        eta_c_scale=eta_c_scale,
        y_d=y_d,
        eta_d_scale=params.rho,
        t_c=t_c,
        t_d=t_d,
    )
