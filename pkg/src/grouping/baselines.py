"""Baseline grouping rules: total-gain ranking, random subsets and full enumeration."""

import itertools
from collections.abc import Iterator

import numpy as np

from src.models.grouping import Grouping
from src.network.seeding import STREAM_GROUPING, derive_rng


def rank_by_gain(beta: np.ndarray, users=None) -> np.ndarray:
    """Users sorted by descending total gain sum_m beta_mk, ties by lower index."""
    users = np.arange(beta.shape[1]) if users is None else np.asarray(list(users), dtype=int)
    gain = np.asarray(beta, dtype=float)[:, users].sum(axis=0)
    return users[np.lexsort((users, -gain))]


def _split(num_users: int, centralized) -> Grouping:
    centralized = np.sort(np.asarray(list(centralized), dtype=int))
    return Grouping(
        centralized=tuple(centralized),
        distributed=tuple(np.setdiff1d(np.arange(num_users), centralized)),
    )


def _check_size(num_users: int, k_c: int) -> None:
    if not 0 <= k_c <= num_users:
        raise ValueError(f"k_c must be in [0, {num_users}], got {k_c}")


def lsf_group(beta: np.ndarray, k_c: int) -> Grouping:
    """Centralize the ``k_c`` users with the largest total gain."""
    num_users = beta.shape[1]
    _check_size(num_users, k_c)
    return _split(num_users, rank_by_gain(beta)[:k_c])


def random_group(num_users: int, k_c: int, seed: int = 0) -> Grouping:
    """Uniformly random ``k_c``-subset, reproducible per (seed, k_c)."""
    _check_size(num_users, k_c)
    rng = derive_rng(seed, STREAM_GROUPING, k_c)
    return _split(num_users, rng.choice(num_users, size=k_c, replace=False))


def exhaustive_groups(num_users: int, k_c: int) -> Iterator[Grouping]:
    """Every ``k_c``-subset in lexicographic order."""
    _check_size(num_users, k_c)
    for subset in itertools.combinations(range(num_users), k_c):
        yield _split(num_users, subset)

