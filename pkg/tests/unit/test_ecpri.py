"""Tests for eCPRI fronthaul accounting."""

import math

import pytest

from src.fronthaul.ecpri import (
    alpha1,
    alpha2,
    check_constraint,
    fh_data,
    fh_precoding,
    fh_usage,
    fh_usage_per_ap,
    max_distributed,
    max_group_sizes,
    serve_all_max_centralized,
)
from src.models.fronthaul import FronthaulParams

GBPS = 1e9


class TestRates:
    def test_alpha1_reference_values(self, reference_fp):
        assert alpha1(reference_fp) == pytest.approx(645_120_000, abs=1e-3)

    def test_alpha1_unit(self):
        fp = FronthaulParams(m_order=2, n_subcarrier=1, n_ofdm=1, ecpri_eff=1.0, delay_data=1.0)
        assert alpha1(fp) == pytest.approx(1.0)

    def test_alpha1_inverse_in_delay(self, reference_fp):
        fast = FronthaulParams(delay_data=reference_fp.delay_data / 2)
        assert alpha1(fast) == pytest.approx(2 * alpha1(reference_fp))

    def test_alpha2_reference_values(self, reference_fp):
        assert alpha2(reference_fp) == pytest.approx(358_400_000, abs=1e-3)

    def test_alpha2_linear_in_antennas(self):
        assert alpha2(FronthaulParams(num_antennas=28)) == pytest.approx(2 * alpha2(FronthaulParams(num_antennas=14)))

    def test_32qam_21_antennas_rates_coincide(self):
        fp = FronthaulParams(m_order=32, num_antennas=21)
        assert alpha1(fp) == pytest.approx(537_600_000, abs=1e-3)
        assert alpha2(fp) == pytest.approx(537_600_000, abs=1e-3)

    def test_rejects_non_power_of_two_order(self):
        with pytest.raises(ValueError, match="m_order"):
            FronthaulParams(m_order=48)

    def test_rejects_zero_antennas(self):
        with pytest.raises(ValueError, match="num_antennas"):
            FronthaulParams(num_antennas=0)


class TestUsage:
    def test_split(self, reference_fp):
        assert fh_data(3, 2, reference_fp) == pytest.approx(5 * 645_120_000)
        assert fh_precoding(3, reference_fp) == pytest.approx(3 * 358_400_000)
        assert fh_usage(3, 2, reference_fp) == pytest.approx(fh_data(3, 2, reference_fp) + fh_precoding(3, reference_fp))

    def test_identical_per_ap(self, reference_fp):
        per_ap = fh_usage_per_ap(2, 1, reference_fp, num_aps=5)
        assert per_ap.shape == (5,)
        assert len(set(per_ap.tolist())) == 1

    def test_empty_groups_always_fit(self, reference_fp):
        assert check_constraint(0, 0, reference_fp, 0.0)

    def test_boundary(self, reference_fp):
        assert check_constraint(0, 13, reference_fp, 9 * GBPS)
        assert not check_constraint(0, 14, reference_fp, 9 * GBPS)

    def test_exact_budget_fits(self, reference_fp):
        assert check_constraint(1, 1, reference_fp, fh_usage(1, 1, reference_fp))

    def test_rejects_negative(self, reference_fp):
        with pytest.raises(ValueError):
            check_constraint(-1, 0, reference_fp, GBPS)


class TestMaxGroupSizes:
    def test_distributed_cap_at_9_gbps(self, reference_fp):
        _, k_max_d = max_group_sizes(reference_fp, 9 * GBPS, num_antennas=14, num_aps=20, num_users=20)
        assert k_max_d == 13

    def test_centralized_cap_at_12_gbps(self, reference_fp):
        k_max_c, _ = max_group_sizes(reference_fp, 12 * GBPS, num_antennas=14, num_aps=20, num_users=20)
        assert k_max_c == 11

    def test_antenna_cap_binds_beyond_9_gbps(self, reference_fp):
        _, k_max_d = max_group_sizes(reference_fp, 10 * GBPS, num_antennas=14, num_aps=20, num_users=20)
        assert k_max_d == 13

    def test_zero_budget(self, reference_fp):
        assert max_group_sizes(reference_fp, 0.0, 14, 20, 20) == (0, 0)

    def test_no_limit(self, reference_fp):
        assert max_group_sizes(reference_fp, math.inf, 14, 20, 20) == (20, 13)

    def test_distributed_exceeds_centralized(self, reference_fp):
        k_max_c, k_max_d = max_group_sizes(reference_fp, 6 * GBPS, 14, 20, 20)
        assert k_max_d > k_max_c


class TestMaxDistributed:
    def test_fills_remaining_budget(self, reference_fp):
        # 12 Gbps - 5 (alpha1 + alpha2) = 6.9824 Gbps -> 10 more users
        assert max_distributed(5, reference_fp, 12 * GBPS, num_antennas=14, num_users=20) == 10

    def test_capped_by_remaining_users(self, reference_fp):
        assert max_distributed(18, reference_fp, math.inf, num_antennas=14, num_users=20) == 2

    def test_over_budget(self, reference_fp):
        assert max_distributed(12, reference_fp, 12 * GBPS, num_antennas=14, num_users=20) == -1


class TestServeAllMaxCentralized:
    def test_constraint_consistent_form(self, reference_fp):
        # (15 - 20 * 0.64512) / 0.3584 = 5.86
        assert serve_all_max_centralized(reference_fp, 15 * GBPS, 20, 20, 14) == 5

    def test_swapped_form(self, reference_fp):
        # (15 - 20 * 0.3584) / 0.64512 = 12.14
        assert serve_all_max_centralized(reference_fp, 15 * GBPS, 20, 20, 14, swapped_rates=True) == 12

    def test_cannot_serve_everyone(self, reference_fp):
        assert serve_all_max_centralized(reference_fp, 10 * GBPS, 20, 20, 14) < 0

    def test_forms_coincide_when_rates_match(self):
        fp = FronthaulParams(m_order=32, num_antennas=21)
        for fh in (11, 14, 20):
            assert serve_all_max_centralized(fp, fh * GBPS, 20, 20, 21) == serve_all_max_centralized(
                fp, fh * GBPS, 20, 20, 21, swapped_rates=True
            )
