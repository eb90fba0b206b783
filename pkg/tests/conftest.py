"""Shared fixtures: small networks and hand-built channel statistics."""

import numpy as np
import pytest

from src.models.channel import ChannelStats
from src.models.fronthaul import FronthaulParams
from src.models.system import SystemParams
from src.network.channel import channel_stats, compute_gamma
from src.network.scenario import generate_drop


@pytest.fixture
def reference_fp():
    """eCPRI parameters of the evaluation setup (64-QAM, L=14)."""
    return FronthaulParams()


@pytest.fixture
def small_params():
    return SystemParams(num_aps=4, num_users=6, num_antennas=8)


@pytest.fixture
def small_stats(small_params):
    return channel_stats(generate_drop(small_params, seed=7))


@pytest.fixture
def toy_params():
    """Three APs, four users, six antennas, unit QoS off."""
    return SystemParams(num_aps=3, num_users=4, num_antennas=6, qos_c=0.0, qos_d=0.0)


@pytest.fixture
def toy_stats():
    """Moderate gains so SINRs stay in a well-conditioned range."""
    rng = np.random.default_rng(1234)
    beta = rng.uniform(0.5, 5.0, size=(3, 4))
    return ChannelStats(beta=beta, gamma=compute_gamma(beta, tau_u=20, rho_u=0.05))
