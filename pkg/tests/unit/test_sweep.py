"""Tests for the K_c sweep and the pure-scheme groupings."""

import math

import numpy as np
import pytest

from src.fronthaul.ecpri import check_constraint
from src.grouping.sweep import (
    candidate_groups,
    fill_distributed,
    pure_grouping,
    select_scheme,
    sweep_candidates,
    sweep_select,
)
from src.models.channel import ChannelStats
from src.models.enums import AllocMode, ExperimentMode, GroupingMethod, Scheme
from src.models.errors import NoFeasibleGroupingError
from src.models.fronthaul import FronthaulParams
from src.models.grouping import Grouping
from src.models.system import SystemParams
from src.network.channel import channel_stats, compute_gamma
from src.network.scenario import generate_drop
from src.precoding.mu import MuEstimator

GBPS = 1e9


@pytest.fixture
def full_beta():
    return np.random.default_rng(2).uniform(0.1, 10.0, size=(20, 20))


def _full_params(fh_gbps: float, num_antennas: int = 14) -> SystemParams:
    return SystemParams(num_aps=20, num_users=20, num_antennas=num_antennas, fh_max=fh_gbps * GBPS)


@pytest.fixture
def tiny():
    """K=4, M=2, L=5 with an unlimited fronthaul."""
    rng = np.random.default_rng(8)
    beta = rng.uniform(0.5, 4.0, size=(2, 4))
    stats = ChannelStats(beta=beta, gamma=compute_gamma(beta, tau_u=20, rho_u=0.05))
    params = SystemParams(num_aps=2, num_users=4, num_antennas=5, qos_c=0.0, qos_d=0.0)
    provider = MuEstimator(stats, num_antennas=5, n_draws=100, seed=3)
    return stats, params, FronthaulParams(num_antennas=5), provider


class TestCandidateGroups:
    def test_single_proposal_methods(self, full_beta):
        for method in (GroupingMethod.KMEANS, GroupingMethod.LSF, GroupingMethod.RANDOM):
            groups = candidate_groups(method, full_beta, 5, seed=1)
            assert len(groups) == 1
            assert groups[0].k_c == 5

    def test_exhaustive(self):
        beta = np.ones((2, 5))
        assert len(candidate_groups(GroupingMethod.EXHAUSTIVE, beta, 2)) == math.comb(5, 2)


class TestFillDistributed:
    def test_drops_weakest_users(self):
        beta = np.array([[1.0, 5.0, 2.0, 4.0, 3.0]])
        grouping = fill_distributed(Grouping(centralized=(1,)), beta, k_d=2)
        assert grouping.centralized == (1,)
        assert grouping.distributed == (3, 4)

    def test_serves_everyone_when_possible(self):
        grouping = fill_distributed(Grouping(centralized=(0,)), np.ones((2, 4)), k_d=3)
        assert sorted(grouping.served) == [0, 1, 2, 3]


class TestSweepCandidates:
    def test_capacity_limited_caps(self, full_beta, reference_fp):
        params = _full_params(9)
        candidates = sweep_candidates(full_beta, reference_fp, params, GroupingMethod.LSF)
        # K_max^c = 8 leaves room for one distributed user; the K_d = 0 variant follows it
        assert [g.k_c for g in candidates] == list(range(9)) + [8]
        assert candidates[0].k_d == 13
        assert (candidates[-2].k_d, candidates[-1].k_d) == (1, 0)
        assert candidates[-1].centralized == candidates[-2].centralized
        for grouping in candidates:
            assert check_constraint(grouping.k_c, grouping.k_d, reference_fp, params.fh_max)
            assert grouping.k_d <= 13

    def test_capacity_limited_has_both_pure_groupings(self, full_beta, reference_fp):
        params = _full_params(12)
        candidates = sweep_candidates(full_beta, reference_fp, params, GroupingMethod.KMEANS)
        pure_c = pure_grouping(Scheme.CENTRALIZED, full_beta, reference_fp, params)[0]
        pure_d = pure_grouping(Scheme.DISTRIBUTED, full_beta, reference_fp, params)[0]
        assert pure_c in candidates
        assert pure_d in candidates

    def test_unlimited_includes_all_centralized(self, full_beta, reference_fp):
        params = _full_params(math.inf)
        candidates = sweep_candidates(full_beta, reference_fp, params, GroupingMethod.KMEANS)
        assert candidates[-1].k_c == 20
        assert candidates[-1].k_d == 0

    def test_serve_all_mode(self, full_beta, reference_fp):
        params = _full_params(15)
        candidates = sweep_candidates(full_beta, reference_fp, params, GroupingMethod.LSF, mode=ExperimentMode.SERVE_ALL_K)
        # L - 1 = 13 bounds K_d from above, so K_c >= 7, and the budget gives K_c <= 5
        assert candidates == []

    def test_serve_all_mode_wide_arrays(self):
        fp = FronthaulParams(m_order=32, num_antennas=21)
        params = SystemParams(num_aps=20, num_users=20, num_antennas=21, fh_max=14 * GBPS)
        beta = np.random.default_rng(4).uniform(0.1, 1.0, size=(20, 20))
        candidates = sweep_candidates(beta, fp, params, GroupingMethod.KMEANS, mode=ExperimentMode.SERVE_ALL_K)
        assert candidates
        for grouping in candidates:
            assert grouping.k_c + grouping.k_d == 20
            assert check_constraint(grouping.k_c, grouping.k_d, fp, params.fh_max)


class TestSweepSelect:
    def test_dominates_pure_candidates(self, tiny):
        stats, params, fp, provider = tiny
        selected = sweep_select(stats, provider, fp, params, GroupingMethod.KMEANS, AllocMode.EPA)
        candidates = sweep_candidates(stats.beta, fp, params, GroupingMethod.KMEANS)
        assert candidates[0].k_c == 0 and candidates[-1].k_d == 0
        assert selected.candidates == len(candidates)
        pure_c = select_scheme(Scheme.CENTRALIZED, stats, provider, fp, params, GroupingMethod.KMEANS, AllocMode.EPA)
        assert selected.report.sum_se >= pure_c.report.sum_se - 1e-12

    @pytest.mark.parametrize("seed", [0, 1, 2])
    @pytest.mark.parametrize("fh_gbps", [4, 8, 12])
    def test_dominates_pure_schemes_at_finite_fronthaul(self, reference_fp, seed, fh_gbps):
        params = _full_params(fh_gbps)
        stats = channel_stats(generate_drop(params, seed=seed))
        provider = MuEstimator(stats, num_antennas=14, n_draws=30, seed=seed)
        hybrid = sweep_select(stats, provider, reference_fp, params, GroupingMethod.KMEANS, AllocMode.EPA)
        for scheme in (Scheme.CENTRALIZED, Scheme.DISTRIBUTED):
            pure = select_scheme(scheme, stats, provider, reference_fp, params, GroupingMethod.KMEANS, AllocMode.EPA)
            assert hybrid.report.sum_se >= pure.report.sum_se - 1e-12

    def test_exhaustive_dominates_heuristics(self, tiny):
        stats, params, fp, provider = tiny
        best = sweep_select(stats, provider, fp, params, GroupingMethod.EXHAUSTIVE, AllocMode.EPA)
        for method in (GroupingMethod.KMEANS, GroupingMethod.LSF):
            other = sweep_select(stats, provider, fp, params, method, AllocMode.EPA)
            assert best.report.sum_se >= other.report.sum_se - 1e-12

    def test_no_candidate(self, tiny):
        stats, _, fp, provider = tiny
        params = SystemParams(num_aps=2, num_users=4, num_antennas=5, fh_max=1 * GBPS)
        with pytest.raises(NoFeasibleGroupingError):
            sweep_select(stats, provider, fp, params, mode=ExperimentMode.SERVE_ALL_K, alloc_mode=AllocMode.EPA)


class TestPureGrouping:
    def test_distributed_takes_strongest(self, full_beta, reference_fp):
        groups = pure_grouping(Scheme.DISTRIBUTED, full_beta, reference_fp, _full_params(6))
        order = np.argsort(-full_beta.sum(axis=0), kind="stable")
        assert set(groups[0].distributed) == set(order[:9].tolist())
        assert groups[0].k_c == 0

    def test_centralized_cap(self, full_beta, reference_fp):
        groups = pure_grouping(Scheme.CENTRALIZED, full_beta, reference_fp, _full_params(12))
        assert groups[0].k_c == 11
        assert groups[0].k_d == 0

    def test_serve_all_skips(self, full_beta, reference_fp):
        params = _full_params(12)
        assert pure_grouping(Scheme.CENTRALIZED, full_beta, reference_fp, params, mode=ExperimentMode.SERVE_ALL_K) == []
        assert pure_grouping(Scheme.DISTRIBUTED, full_beta, reference_fp, params, mode=ExperimentMode.SERVE_ALL_K) == []

    def test_hybrid_rejected(self, full_beta, reference_fp):
        with pytest.raises(ValueError):
            pure_grouping(Scheme.HYBRID, full_beta, reference_fp, _full_params(12))


class TestSelectScheme:
    def test_distributed_epa(self, tiny):
        stats, params, fp, provider = tiny
        selected = select_scheme(Scheme.DISTRIBUTED, stats, provider, fp, params, GroupingMethod.LSF, AllocMode.EPA)
        assert selected.grouping.k_c == 0
        assert selected.grouping.k_d == 4
        assert selected.sca_iters == 0

    def test_skipped_scheme_returns_none(self, tiny):
        stats, _, fp, provider = tiny
        params = SystemParams(num_aps=2, num_users=4, num_antennas=5, fh_max=1 * GBPS)
        result = select_scheme(
            Scheme.CENTRALIZED, stats, provider, fp, params, alloc_mode=AllocMode.EPA, mode=ExperimentMode.SERVE_ALL_K
        )
        assert result is None

    def test_exhaustive_centralized(self, tiny):
        stats, params, fp, provider = tiny
        selected = select_scheme(Scheme.CENTRALIZED, stats, provider, fp, params, GroupingMethod.EXHAUSTIVE, AllocMode.EPA)
        assert selected.candidates == 1
        assert selected.grouping.centralized == (0, 1, 2, 3)
