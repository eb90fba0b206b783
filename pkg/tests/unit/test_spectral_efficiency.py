"""Tests for the closed-form SINRs and the SE report."""

import math

import numpy as np
import pytest

from src.evaluation.spectral_efficiency import (
    all_sinrs,
    centralized_sinrs,
    distributed_sinrs,
    qos_sinr_threshold,
    sinr_centralized,
    sinr_distributed,
    spectral_efficiency,
    sum_se,
)
from src.fronthaul.ecpri import fh_usage
from src.models.channel import ChannelStats
from src.models.errors import GroupSizeError
from src.models.grouping import Grouping
from src.models.power import PowerAllocation
from src.models.system import SystemParams


def _params(m: int, k: int, l_ant: int, **kwargs) -> SystemParams:
    return SystemParams(num_aps=m, num_users=k, num_antennas=l_ant, **kwargs)


class TestCentralizedSinr:
    def test_zero_interference_limit(self):
        beta = np.array([[2.0]])
        stats = ChannelStats(beta=beta, gamma=beta.copy())
        alloc = PowerAllocation(eta_c=[0.7], eta_d=np.zeros((1, 0)))
        sinr = sinr_centralized(0, stats, Grouping(centralized=(0,)), np.array([[1.3]]), alloc)
        assert sinr == pytest.approx(0.7)

    def test_zero_power(self, toy_stats):
        grouping = Grouping(centralized=(0, 1), distributed=(2,))
        alloc = PowerAllocation.zeros(3, 2, 1)
        np.testing.assert_array_equal(centralized_sinrs(toy_stats, grouping, np.ones((3, 2)), alloc), 0.0)

    def test_hand_computed(self):
        beta = np.array([[1.0, 2.0, 4.0], [3.0, 1.0, 2.0]])
        gamma = np.array([[0.5, 1.0, 2.0], [1.0, 0.5, 1.0]])
        stats = ChannelStats(beta=beta, gamma=gamma)
        grouping = Grouping(centralized=(0, 1), distributed=(2,))
        mu = np.array([[0.1, 0.2], [0.3, 0.4]])
        alloc = PowerAllocation(eta_c=[1.0, 2.0], eta_d=[[0.5], [0.25]])
        # user 0: u_00 = 0.1*0.5 + 0.3*2 = 0.65, u_10 = 0.2*0.5 + 0.4*2 = 0.9
        #         distributed term (0.5*1 + 0.25*3) = 1.25
        expected0 = 1.0 / (1.0 * 0.65 + 2.0 * 0.9 + 1.25 + 1.0)
        assert sinr_centralized(0, stats, grouping, mu, alloc) == pytest.approx(expected0)

    def test_rejects_distributed_user(self, toy_stats):
        grouping = Grouping(centralized=(0,), distributed=(1,))
        with pytest.raises(ValueError, match="centralized"):
            sinr_centralized(1, toy_stats, grouping, np.ones((3, 1)), PowerAllocation.zeros(3, 1, 1))


class TestDistributedSinr:
    def test_single_term(self):
        beta, gamma, eta = 2.0, 1.5, 0.8
        stats = ChannelStats(beta=np.array([[beta]]), gamma=np.array([[gamma]]))
        alloc = PowerAllocation(eta_c=[], eta_d=[[eta]])
        sinr = sinr_distributed(0, stats, Grouping(distributed=(0,)), alloc, num_antennas=2)
        assert sinr == pytest.approx(eta * gamma / (eta * (beta - gamma) + 1))

    def test_perfect_csi(self):
        beta = np.array([[2.0, 1.0, 3.0]])
        stats = ChannelStats(beta=beta, gamma=beta.copy())
        grouping = Grouping(distributed=(0, 1, 2))
        alloc = PowerAllocation(eta_c=[], eta_d=[[0.2, 0.3, 0.1]])
        sinr = distributed_sinrs(stats, grouping, None, alloc, num_antennas=5)
        np.testing.assert_allclose(sinr, (5 - 3) * np.array([0.2, 0.3, 0.1]) * beta[0])

    def test_coherent_combining_over_aps(self):
        beta = np.ones((4, 1))
        stats = ChannelStats(beta=beta, gamma=beta.copy())
        alloc = PowerAllocation(eta_c=[], eta_d=np.full((4, 1), 0.25))
        # (sum_m sqrt(eta gamma))^2 = (4 * 0.5)^2
        assert sinr_distributed(0, stats, Grouping(distributed=(0,)), alloc, 2) == pytest.approx(4.0)

    def test_group_too_large(self, toy_stats):
        grouping = Grouping(distributed=(0, 1, 2))
        with pytest.raises(GroupSizeError):
            distributed_sinrs(toy_stats, grouping, None, PowerAllocation.zeros(3, 0, 3), num_antennas=3)

    def test_requires_mu_with_centralized_group(self, toy_stats):
        grouping = Grouping(centralized=(0,), distributed=(1,))
        with pytest.raises(ValueError, match="mu"):
            sinr_distributed(1, toy_stats, grouping, PowerAllocation.zeros(3, 1, 1), 6)

    def test_centralized_users_interfere(self, toy_stats):
        grouping = Grouping(centralized=(0,), distributed=(1,))
        quiet = PowerAllocation(eta_c=[0.0], eta_d=np.full((3, 1), 0.1))
        loud = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 1), 0.1))
        mu = np.full((3, 1), 0.2)
        assert distributed_sinrs(toy_stats, grouping, mu, loud, 6)[0] < distributed_sinrs(
            toy_stats, grouping, mu, quiet, 6
        )[0]


class TestSpectralEfficiency:
    def test_unit_sinr(self):
        params = _params(1, 1, 1, tau=2000, tau_u=20)
        assert spectral_efficiency(1.0, params.prelog) == pytest.approx(0.99)

    def test_qos_threshold_inverts_se(self):
        threshold = qos_sinr_threshold(1.0, 0.99)
        assert spectral_efficiency(threshold, 0.99) == pytest.approx(1.0)
        assert qos_sinr_threshold(0.99, 0.99) == pytest.approx(1.0)

    def test_all_sinrs_order(self, toy_stats):
        grouping = Grouping(centralized=(2,), distributed=(0, 3))
        mu = np.full((3, 1), 0.3)
        alloc = PowerAllocation(eta_c=[0.4], eta_d=np.full((3, 2), 0.2))
        sinr = all_sinrs(toy_stats, grouping, mu, alloc, 6)
        assert sinr[0] == pytest.approx(sinr_centralized(2, toy_stats, grouping, mu, alloc))
        assert sinr[2] == pytest.approx(sinr_distributed(3, toy_stats, grouping, alloc, 6, mu))


class TestSumSe:
    @pytest.fixture
    def grouping(self):
        return Grouping(centralized=(0,), distributed=(1, 2))

    @pytest.fixture
    def mu(self):
        return np.full((3, 1), 0.5)

    def test_additive(self, toy_stats, toy_params, grouping, mu):
        alloc = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 2), 0.2))
        report = sum_se(toy_stats, grouping, mu, alloc, toy_params)
        assert report.sum_se == pytest.approx(float(np.sum(report.se)))
        assert report.users == (0, 1, 2)
        assert report.se_of(2) == pytest.approx(report.se[2])
        assert report.min_user_se == pytest.approx(float(np.min(report.se)))

    def test_power_violation(self, toy_stats, toy_params, grouping, mu):
        # load = 0.5 * 0.5 + 2 * 0.45 = 1.15 > rho
        alloc = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 2), 0.45))
        report = sum_se(toy_stats, grouping, mu, alloc, toy_params)
        assert not report.power_ok
        assert not report.feasible

    def test_power_at_budget_is_feasible(self, toy_stats, toy_params, grouping, mu):
        alloc = PowerAllocation(eta_c=[1.0], eta_d=np.full((3, 2), 0.25))
        report = sum_se(toy_stats, grouping, mu, alloc, toy_params)
        assert report.power_ok
        assert report.feasible

    def test_qos_violation(self, toy_stats, grouping, mu):
        params = _params(3, 4, 6, qos_c=50.0, qos_d=50.0)
        alloc = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 2), 0.2))
        report = sum_se(toy_stats, grouping, mu, alloc, params)
        assert not report.qos_ok
        assert not report.feasible

    def test_fronthaul_check(self, toy_stats, grouping, mu, reference_fp):
        alloc = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 2), 0.2))
        needed = fh_usage(1, 2, reference_fp)
        tight = _params(3, 4, 6, qos_c=0.0, qos_d=0.0, fh_max=needed - 10.0)
        loose = _params(3, 4, 6, qos_c=0.0, qos_d=0.0, fh_max=needed)
        assert not sum_se(toy_stats, grouping, mu, alloc, tight, reference_fp).fh_ok
        report = sum_se(toy_stats, grouping, mu, alloc, loose, reference_fp)
        assert report.fh_ok
        np.testing.assert_allclose(report.fh_used, needed)

    def test_without_fronthaul_params(self, toy_stats, toy_params, grouping, mu):
        alloc = PowerAllocation(eta_c=[0.5], eta_d=np.full((3, 2), 0.2))
        report = sum_se(toy_stats, grouping, mu, alloc, toy_params)
        assert report.fh_ok
        np.testing.assert_array_equal(report.fh_used, 0.0)

    def test_nothing_served(self, toy_stats, toy_params):
        report = sum_se(toy_stats, Grouping(), None, PowerAllocation.zeros(3, 0, 0), toy_params)
        assert report.sum_se == 0.0
        assert report.min_user_se == 0.0
        assert not math.isnan(report.sum_se)

    def test_shape_mismatch(self, toy_stats, toy_params, grouping, mu):
        with pytest.raises(ValueError, match="eta_d"):
            sum_se(toy_stats, grouping, mu, PowerAllocation.zeros(3, 1, 3), toy_params)
