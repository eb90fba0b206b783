"""Successive convex approximation (SCA) power control.

Each iteration solves the convex program of ``src.power.subproblem`` around the
current point and moves to its solution. The next expansion point is re-tightened
to the exact SINRs of the new coefficients, so the exact objective never decreases.
"""

import csv
import logging
from dataclasses import replace
from pathlib import Path

import cvxpy as cp
import numpy as np

from config.settings import Settings, get_settings
from src.evaluation.spectral_efficiency import all_sinrs, sum_se
from src.models.channel import ChannelStats
from src.models.enums import Objective
from src.models.errors import QosInfeasibleError, SolverError
from src.models.fronthaul import FronthaulParams
from src.models.grouping import Grouping
from src.models.power import PowerAllocation, ScaState
from src.models.report import ScaResult, ScaTraceRow
from src.models.system import SystemParams
from src.power.epa import epa
from src.power.subproblem import Focus, Subproblem, build_subproblem, tighten

logger = logging.getLogger(__name__)

MONOTONE_SLACK = 1e-9  # relative

_SOLVED = (cp.OPTIMAL, cp.OPTIMAL_INACCURATE)
_INFEASIBLE = (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE)


def solver_options(solver: str, tol: float) -> dict:
    """Tolerance keywords understood by the common cvxpy conic solvers."""
    name = solver.upper()
    if name == "CLARABEL":
        return {"tol_gap_abs": tol, "tol_gap_rel": tol, "tol_feas": tol}
    if name == "ECOS":
        return {"abstol": tol, "reltol": tol, "feastol": tol}
    if name == "SCS":
        return {"eps_abs": tol, "eps_rel": tol}
    return {}


def exact_objective(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    alloc: PowerAllocation,
    params: SystemParams,
    objective: Objective = Objective.GEOMEAN,
) -> float:
    """Objective value at ``alloc`` from the exact SINRs.

    GEOMEAN tracks the sum SE; GROUP_PRODUCTS tracks prod_{K_c}(1 + SINR) + prod_{K_d}(1 + SINR).
    """
    sinr = all_sinrs(stats, grouping, mu, alloc, params.num_antennas)
    if objective == Objective.GROUP_PRODUCTS:
        return float(np.prod(1.0 + sinr[: grouping.k_c]) + np.prod(1.0 + sinr[grouping.k_c :]))
    return float(params.prelog * np.sum(np.log2(1.0 + sinr)))


def max_power_violation(alloc: PowerAllocation, mu: np.ndarray, rho: float) -> float:
    return float(max(np.max(alloc.ap_load(mu), initial=0.0) - rho, 0.0))


def write_trace(trace: list[ScaTraceRow], path: Path) -> None:
    """Write ``iter,objective,max_power_violation`` rows to a CSV file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["iter", "objective", "max_power_violation"])
        for row in trace:
            writer.writerow([row.iter, repr(row.objective), repr(row.max_power_violation)])


def _solve(sub: Subproblem, settings: Settings) -> bool:
    """Solve in place; False when the program is infeasible."""
    try:
        sub.problem.solve(
            solver=settings.hybridfh_solver,
            **solver_options(settings.hybridfh_solver, settings.hybridfh_solver_tol),
        )
    except cp.error.SolverError as exc:
        raise SolverError(f"{settings.hybridfh_solver} failed: {exc}") from exc
    status = sub.problem.status
    if status in _INFEASIBLE:
        return False
    if status not in _SOLVED:
        raise SolverError(f"{settings.hybridfh_solver} returned status {status}")
    return True


def _focus_sequence(grouping: Grouping, objective: Objective) -> list[Focus]:
    if objective == Objective.GROUP_PRODUCTS and grouping.k_c and grouping.k_d:
        return [Focus.CENTRALIZED, Focus.DISTRIBUTED]
    return [Focus.ALL]


def _step(
    state: ScaState,
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    params: SystemParams,
    qos: bool,
    objective: Objective,
    settings: Settings,
) -> ScaState | None:
    """One SCA iteration; None when a subproblem is infeasible."""
    current = state
    for focus in _focus_sequence(grouping, objective):
        sub = build_subproblem(current, stats, grouping, mu, params, qos=qos, focus=focus)
        if not _solve(sub, settings):
            return None
        alloc = sub.allocation(mu, params.rho)
        value = exact_objective(stats, grouping, mu, alloc, params, objective)
        current = tighten(alloc, state.iteration + 1, value, stats, grouping, mu, params)
    return current


def solve_sca(
    stats: ChannelStats,
    grouping: Grouping,
    mu: np.ndarray,
    params: SystemParams,
    init: PowerAllocation | None = None,
    objective: Objective = Objective.GEOMEAN,
    qos: bool = True,
    best_effort: bool = False,
    fp: FronthaulParams | None = None,
    settings: Settings | None = None,
    trace_path: Path | None = None,
) -> ScaResult:
    """Optimize the power coefficients of one grouping.

    A solver failure ends the iterations: the last accepted iterate (``init`` when
    the first subproblem fails) is returned with ``solver_failed`` set.

    Args:
        stats: Channel statistics.
        grouping: User grouping.
        mu: M x K_c centralized power statistic.
        params: System parameters.
        init: Starting point, feasible for the per-AP budget; EPA when omitted.
        objective: GEOMEAN maximizes the geometric mean of (1 + SINR) (equivalently
            the sum SE); GROUP_PRODUCTS alternates between the two group products.
        qos: Enforce the minimum-SE constraints.
        best_effort: When the first subproblem is infeasible under QoS, drop the
            QoS constraints and flag the report instead of raising.
        fp: Fronthaul parameters forwarded to the final report.
        settings: Solver and stopping settings.
        trace_path: When given, the per-iteration trace is written there as CSV.

    Returns:
        ScaResult with the final allocation, its exact SE report and the trace.

    Raises:
        QosInfeasibleError: The first subproblem is infeasible and ``best_effort`` is off.
    """
    settings = settings or get_settings()
    mu = np.zeros((stats.num_aps, 0)) if grouping.k_c == 0 else np.asarray(mu, dtype=float)
    if init is None:
        init = epa(stats, grouping, mu, params)

    if grouping.k_c == 0 and grouping.k_d == 0:
        return ScaResult(alloc=init, report=sum_se(stats, grouping, mu, init, params, fp), converged=True)

    value = exact_objective(stats, grouping, mu, init, params, objective)
    state = tighten(init, 0, value, stats, grouping, mu, params)
    trace = [ScaTraceRow(0, value, max_power_violation(init, mu, params.rho))]
    # a start that misses the QoS targets may lose objective on the first step
    guard_first = not qos or sum_se(stats, grouping, mu, init, params).qos_ok
    qos_infeasible = False
    solver_failed = False
    converged = False

    for n in range(settings.hybridfh_sca_max_iter):
        try:
            nxt = _step(state, stats, grouping, mu, params, qos, objective, settings)
            if nxt is None and n == 0 and qos:
                if not best_effort:
                    raise QosInfeasibleError(
                        f"QoS constraints infeasible for K_c={grouping.k_c}, K_d={grouping.k_d}"
                    )
                logger.warning("QoS infeasible for K_c=%d, K_d=%d; re-solving without QoS", grouping.k_c, grouping.k_d)
                qos, qos_infeasible = False, True
                nxt = _step(state, stats, grouping, mu, params, qos, objective, settings)
        except SolverError as exc:
            solver_failed = True
            if n == 0:
                logger.warning("K_c=%d, K_d=%d: %s; keeping the initial allocation", grouping.k_c, grouping.k_d, exc)
            else:
                logger.warning("SCA iteration %d: %s; keeping the last iterate", n, exc)
            break
        if nxt is None:
            logger.warning("SCA subproblem infeasible at iteration %d; keeping the last iterate", n)
            break
        if (n or guard_first) and nxt.objective < state.objective - MONOTONE_SLACK * max(abs(state.objective), 1.0):
            if state.objective - nxt.objective < settings.hybridfh_sca_tol * max(abs(state.objective), 1e-12):
                converged = True
            else:
                logger.warning("SCA iterate %d decreased the objective; stopping", n + 1)
            break

        previous = state.objective
        state = nxt
        trace.append(ScaTraceRow(n + 1, state.objective, max_power_violation(state.alloc, mu, params.rho)))
        logger.info("SCA iter %d: objective=%.6f", n + 1, state.objective)
        if abs(state.objective - previous) < settings.hybridfh_sca_tol * max(abs(previous), 1e-12):
            converged = True
            break

    report = sum_se(stats, grouping, mu, state.alloc, params, fp)
    if qos_infeasible or solver_failed:
        report = replace(report, qos_infeasible=qos_infeasible, solver_failed=solver_failed)
    if trace_path is not None:
        write_trace(trace, trace_path)
    return ScaResult(
        alloc=state.alloc,
        report=report,
        trace=trace,
        converged=converged,
        qos_infeasible=qos_infeasible,
        solver_failed=solver_failed,
    )
