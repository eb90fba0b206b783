"""K_c sweep: pick the grouping with the largest sum SE under the fronthaul cap.

For every K_c from 0 to its fronthaul maximum, the grouping method proposes the
centralized set, the distributed set is filled up to the fronthaul and antenna
caps, and the candidate is scored. The largest centralized sets are also scored
without distributed users. Ties keep the smaller K_c.
"""

import logging
from collections.abc import Callable
from pathlib import Path

import numpy as np

from config.settings import Settings, get_settings
from src.evaluation.spectral_efficiency import sum_se
from src.fronthaul.ecpri import (
    check_constraint,
    max_distributed,
    max_group_sizes,
    serve_all_max_centralized,
)
from src.grouping.baselines import exhaustive_groups, lsf_group, random_group, rank_by_gain
from src.grouping.clustering import kmeans_group
from src.models.channel import ChannelStats
from src.models.enums import AllocMode, ExperimentMode, GroupingMethod, Objective, Scheme
from src.models.errors import NoFeasibleGroupingError
from src.models.fronthaul import FronthaulParams
from src.models.grouping import Grouping
from src.models.report import SelectionResult
from src.models.system import SystemParams
from src.power.epa import epa
from src.power.sca import solve_sca, write_trace

logger = logging.getLogger(__name__)

MuProvider = Callable[[Grouping], np.ndarray]


def candidate_groups(method: GroupingMethod, beta: np.ndarray, k_c: int, seed: int = 0) -> list[Grouping]:
    """Centralized-set proposals of one grouping method at one K_c."""
    method = GroupingMethod(method)
    num_users = beta.shape[1]
    if method == GroupingMethod.KMEANS:
        return [kmeans_group(beta, k_c, seed)]
    if method == GroupingMethod.LSF:
        return [lsf_group(beta, k_c)]
    if method == GroupingMethod.RANDOM:
        return [random_group(num_users, k_c, seed)]
    return list(exhaustive_groups(num_users, k_c))


def fill_distributed(grouping: Grouping, beta: np.ndarray, k_d: int) -> Grouping:
    """Keep the centralized set and serve the ``k_d`` strongest remaining users locally.

    Users left out (lowest total gain first) are not served.
    """
    remaining = [k for k in range(beta.shape[1]) if k not in grouping.centralized]
    chosen = np.sort(rank_by_gain(beta, remaining)[:k_d])
    return Grouping(centralized=grouping.centralized, distributed=tuple(chosen))


def _mu_for(grouping: Grouping, mu_provider: MuProvider, num_aps: int) -> np.ndarray:
    if grouping.k_c == 0:
        return np.zeros((num_aps, 0))
    return mu_provider(grouping)


def _score(
    grouping: Grouping,
    stats: ChannelStats,
    mu: np.ndarray,
    params: SystemParams,
    fp: FronthaulParams,
    optimize: bool,
    objective: Objective,
    settings: Settings,
    trace_path: Path | None = None,
) -> SelectionResult:
    if optimize:
        result = solve_sca(
            stats, grouping, mu, params,
            objective=objective,
            best_effort=True,
            fp=fp,
            settings=settings,
            trace_path=trace_path,
        )
        return SelectionResult(
            grouping=grouping,
            alloc=result.alloc,
            report=result.report,
            sca_iters=result.iterations,
            trace=result.trace,
        )
    alloc = epa(stats, grouping, mu, params)
    return SelectionResult(grouping=grouping, alloc=alloc, report=sum_se(stats, grouping, mu, alloc, params, fp))


def _argmax(scored: list[SelectionResult]) -> SelectionResult:
    """Largest sum SE; ties keep the earlier candidate."""
    best = scored[0]
    for result in scored[1:]:
        if result.report.sum_se > best.report.sum_se:
            best = result
    return best


def _finalists(scored: list[SelectionResult]) -> list[SelectionResult]:
    """EPA winner plus the best all-distributed and all-centralized candidates, in sweep order."""
    picks = [_argmax(scored)]
    pure_d = [s for s in scored if s.grouping.k_c == 0]
    pure_c = [s for s in scored if s.grouping.k_d == 0 and s.grouping.k_c]
    if pure_d:
        picks.append(_argmax(pure_d))
    if pure_c:
        top = max(s.grouping.k_c for s in pure_c)
        picks.append(_argmax([s for s in pure_c if s.grouping.k_c == top]))
    order = {id(s): i for i, s in enumerate(scored)}
    unique = {id(s): s for s in picks}
    return sorted(unique.values(), key=lambda s: order[id(s)])


def sweep_candidates(
    beta: np.ndarray,
    fp: FronthaulParams,
    params: SystemParams,
    method: GroupingMethod,
    mode: ExperimentMode = ExperimentMode.CAPACITY_LIMITED,
    fig3_kmax_compat: bool = False,
    seed: int = 0,
) -> list[Grouping]:
    """Every grouping the sweep scores, in increasing K_c order.

    In ``capacity_limited`` mode K_d is the largest size that fits next to K_c, and
    the K_max^c proposals are also scored with K_d = 0, so the all-centralized and
    all-distributed groupings are both candidates. In ``serve_all_K`` mode
    K_d = K - K_c and candidates breaking the caps are skipped.
    """
    m, num_users, l_ant = params.num_aps, params.num_users, params.num_antennas
    mode = ExperimentMode(mode)
    out: list[Grouping] = []

    if mode == ExperimentMode.CAPACITY_LIMITED:
        k_max_c, _ = max_group_sizes(fp, params.fh_max, l_ant, m, num_users)
        for k_c in range(k_max_c + 1):
            k_d = max_distributed(k_c, fp, params.fh_max, l_ant, num_users)
            if k_d < 0:
                logger.warning("K_c=%d leaves no fronthaul for data; skipped", k_c)
                continue
            proposals = candidate_groups(method, beta, k_c, seed)
            out.extend(fill_distributed(g, beta, k_d) for g in proposals)
            if k_c == k_max_c and k_c and k_d:
                # the all-centralized grouping is a candidate even when data fronthaul is left over
                out.extend(Grouping(centralized=g.centralized) for g in proposals)
        return out

    k_max_c = serve_all_max_centralized(fp, params.fh_max, num_users, m, l_ant, swapped_rates=fig3_kmax_compat)
    for k_c in range(k_max_c + 1):
        k_d = num_users - k_c
        if k_d > l_ant - 1:
            continue
        if not fig3_kmax_compat and not check_constraint(k_c, k_d, fp, params.fh_max):
            continue
        out.extend(candidate_groups(method, beta, k_c, seed))
    return out


def sweep_select(
    stats: ChannelStats,
    mu_provider: MuProvider,
    fp: FronthaulParams,
    params: SystemParams,
    method: GroupingMethod = GroupingMethod.KMEANS,
    alloc_mode: AllocMode = AllocMode.OPA,
    mode: ExperimentMode = ExperimentMode.CAPACITY_LIMITED,
    full_opa_sweep: bool = False,
    fig3_kmax_compat: bool = False,
    objective: Objective = Objective.GEOMEAN,
    seed: int = 0,
    settings: Settings | None = None,
    trace_path: Path | None = None,
) -> SelectionResult:
    """Select the hybrid grouping with the largest sum SE.

    Args:
        stats: Channel statistics of the drop.
        mu_provider: Returns the M x K_c power statistic of a grouping.
        fp: Fronthaul parameters.
        params: System parameters (FH_max, L, QoS, ...).
        method: Grouping method proposing the centralized set.
        alloc_mode: EPA, or OPA via SCA.
        mode: ``capacity_limited`` drops users the fronthaul cannot carry;
            ``serve_all_K`` only accepts candidates serving every user.
        full_opa_sweep: Run SCA on every candidate instead of scoring the sweep
            with EPA and optimizing the winner and the best
            all-centralized and all-distributed candidates.
        fig3_kmax_compat: Use the swapped-rate K_max^c formula in serve_all_K mode.
        objective: SCA objective.
        seed: Seed of the random grouping method.
        settings: Solver settings.
        trace_path: SCA trace CSV of the final optimization.

    Raises:
        NoFeasibleGroupingError: No candidate satisfies the caps.
    """
    settings = settings or get_settings()
    alloc_mode = AllocMode(alloc_mode)
    candidates = sweep_candidates(stats.beta, fp, params, method, mode, fig3_kmax_compat, seed)
    if not candidates:
        raise NoFeasibleGroupingError(f"no (K_c, K_d) candidate fits FH_max={params.fh_max:.4g} bit/s in mode {mode}")

    optimize_each = alloc_mode == AllocMode.OPA and full_opa_sweep
    scored_all = []
    for grouping in candidates:
        mu = _mu_for(grouping, mu_provider, stats.num_aps)
        scored = _score(grouping, stats, mu, params, fp, optimize_each, objective, settings)
        logger.debug("K_c=%d K_d=%d sum SE=%.4f", grouping.k_c, grouping.k_d, scored.report.sum_se)
        scored_all.append(scored)
    best = _argmax(scored_all)

    if alloc_mode == AllocMode.OPA and not full_opa_sweep:
        optimized = []
        for finalist in _finalists(scored_all):
            mu = _mu_for(finalist.grouping, mu_provider, stats.num_aps)
            optimized.append(_score(finalist.grouping, stats, mu, params, fp, True, objective, settings))
        best = _argmax(optimized)
    if trace_path is not None and best.trace:
        write_trace(best.trace, trace_path)

    logger.info(
        "Sweep (%s, %s): %d candidates, K_c=%d K_d=%d sum SE=%.4f",
        GroupingMethod(method).value, alloc_mode.value, len(candidates),
        best.grouping.k_c, best.grouping.k_d, best.report.sum_se,
    )
    return SelectionResult(
        grouping=best.grouping,
        alloc=best.alloc,
        report=best.report,
        sca_iters=best.sca_iters,
        trace=best.trace,
        candidates=len(candidates),
    )


def pure_grouping(
    scheme: Scheme,
    beta: np.ndarray,
    fp: FronthaulParams,
    params: SystemParams,
    method: GroupingMethod = GroupingMethod.KMEANS,
    mode: ExperimentMode = ExperimentMode.CAPACITY_LIMITED,
    seed: int = 0,
) -> list[Grouping]:
    """Candidate groupings of an all-centralized or all-distributed scheme.

    Centralized serves up to K_max^c users chosen by ``method``; distributed serves
    the K_max^d strongest users. In ``serve_all_K`` mode an empty list means the
    scheme cannot serve every user.
    """
    scheme = Scheme(scheme)
    m, num_users, l_ant = params.num_aps, params.num_users, params.num_antennas
    k_max_c, k_max_d = max_group_sizes(fp, params.fh_max, l_ant, m, num_users)
    serve_all = ExperimentMode(mode) == ExperimentMode.SERVE_ALL_K

    if scheme == Scheme.CENTRALIZED:
        if serve_all and k_max_c < num_users:
            return []
        return [Grouping(centralized=g.centralized) for g in candidate_groups(method, beta, k_max_c, seed)]
    if scheme == Scheme.DISTRIBUTED:
        if serve_all and k_max_d < num_users:
            return []
        return [Grouping(distributed=tuple(np.sort(rank_by_gain(beta)[:k_max_d])))]
    raise ValueError("hybrid groupings come from sweep_select")


def select_scheme(
    scheme: Scheme,
    stats: ChannelStats,
    mu_provider: MuProvider,
    fp: FronthaulParams,
    params: SystemParams,
    method: GroupingMethod = GroupingMethod.KMEANS,
    alloc_mode: AllocMode = AllocMode.OPA,
    mode: ExperimentMode = ExperimentMode.CAPACITY_LIMITED,
    full_opa_sweep: bool = False,
    fig3_kmax_compat: bool = False,
    objective: Objective = Objective.GEOMEAN,
    seed: int = 0,
    settings: Settings | None = None,
    trace_path: Path | None = None,
) -> SelectionResult | None:
    """Grouping, allocation and report of one scheme; None when a pure scheme is skipped."""
    scheme = Scheme(scheme)
    if scheme == Scheme.HYBRID:
        return sweep_select(
            stats, mu_provider, fp, params, method, alloc_mode,
            mode=mode,
            full_opa_sweep=full_opa_sweep,
            fig3_kmax_compat=fig3_kmax_compat,
            objective=objective,
            seed=seed,
            settings=settings,
            trace_path=trace_path,
        )

    settings = settings or get_settings()
    candidates = pure_grouping(scheme, stats.beta, fp, params, method, mode, seed)
    if not candidates:
        logger.warning("%s scheme cannot serve all %d users at FH_max=%.4g; skipped",
                       scheme.value, params.num_users, params.fh_max)
        return None

    optimize = AllocMode(alloc_mode) == AllocMode.OPA
    if len(candidates) == 1:
        grouping = candidates[0]
        mu = _mu_for(grouping, mu_provider, stats.num_aps)
        best = _score(grouping, stats, mu, params, fp, optimize, objective, settings, trace_path)
    else:
        # exhaustive proposals are ranked under EPA, like the hybrid sweep
        best = None
        for grouping in candidates:
            mu = _mu_for(grouping, mu_provider, stats.num_aps)
            scored = _score(grouping, stats, mu, params, fp, False, objective, settings)
            if best is None or scored.report.sum_se > best.report.sum_se:
                best = scored
        if optimize:
            mu = _mu_for(best.grouping, mu_provider, stats.num_aps)
            best = _score(best.grouping, stats, mu, params, fp, True, objective, settings, trace_path)
    return SelectionResult(
        grouping=best.grouping,
        alloc=best.alloc,
        report=best.report,
        sca_iters=best.sca_iters,
        trace=best.trace,
        candidates=len(candidates),
    )
