"""Two-cluster K-means on large-scale fading vectors under the cosine distance.

Users whose beta vectors point the same way are served well by one network-wide
zero-forcing precoder; the tighter of the two clusters seeds the centralized group.
"""

import logging

import numpy as np
from sklearn.metrics.pairwise import cosine_distances

from src.models.errors import DegenerateVectorError
from src.models.grouping import Grouping

logger = logging.getLogger(__name__)

MAX_ITER = 100


def cosine_distance(b1, b2) -> float:
    """1 - b1.b2 / (|b1| |b2|), clipped to [0, 1] for non-negative vectors.

    Raises:
        DegenerateVectorError: Either vector is zero.
    """
    b1 = np.asarray(b1, dtype=float).reshape(1, -1)
    b2 = np.asarray(b2, dtype=float).reshape(1, -1)
    if not np.any(b1) or not np.any(b2):
        raise DegenerateVectorError("cosine distance is undefined for a zero vector")
    return float(np.clip(cosine_distances(b1, b2)[0, 0], 0.0, 1.0))


def mean_pairwise_distance(features: np.ndarray, members) -> float:
    """Mean cosine distance over unordered pairs; inf for fewer than two members."""
    members = list(members)
    if len(members) < 2:
        return float("inf")
    dist = cosine_distances(features[members])
    upper = np.triu_indices(len(members), k=1)
    return float(np.mean(dist[upper]))


class CosineKMeans:
    """K-means with two clusters, cosine assignment and mean centroids.

    Initialization is deterministic: the two users farthest apart in cosine
    distance (first such pair in index order).
    """

    def __init__(self, max_iter: int = MAX_ITER):
        self.max_iter = max_iter
        self.cluster_centers_: np.ndarray | None = None
        self.labels_: np.ndarray | None = None
        self.n_iter_ = 0

    def fit_predict(self, features: np.ndarray) -> np.ndarray:
        """Cluster the rows of ``features`` (one row per user)."""
        if np.any(~np.any(features, axis=1)):
            raise DegenerateVectorError("every user needs a non-zero gain vector")
        pairwise = cosine_distances(features)
        first, second = np.unravel_index(np.argmax(pairwise), pairwise.shape)
        centers = features[[first, second]].astype(float)

        labels = np.full(features.shape[0], -1)
        for it in range(self.max_iter):
            new_labels = np.argmin(cosine_distances(features, centers), axis=1)
            self.n_iter_ = it + 1
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
            for c in range(2):
                members = features[labels == c]
                # an emptied cluster keeps its previous centroid
                if len(members):
                    centers[c] = members.mean(axis=0)

        self.cluster_centers_ = centers
        self.labels_ = labels
        return labels


def kmeans_group(beta: np.ndarray, k_c: int, seed: int = 0) -> Grouping:
    """Pick ``k_c`` centralized users from the tighter cosine-distance cluster.

    The two clusters are compared by mean intra-cluster pairwise distance (ties
    and two singletons go to cluster 0). All users are then ranked by distance to
    that cluster's centroid and the closest ``k_c`` form the centralized group, so
    the result has exactly ``k_c`` users even when the cluster is larger or
    smaller. The procedure is deterministic; ``seed`` is accepted so every
    grouping method shares one call signature.

    Args:
        beta: M x K large-scale gains.
        k_c: Target centralized group size, 0 <= k_c <= K.

    Returns:
        Grouping with sorted centralized users and every other user distributed.
    """
    num_users = beta.shape[1]
    if not 0 <= k_c <= num_users:
        raise ValueError(f"k_c must be in [0, {num_users}], got {k_c}")
    users = np.arange(num_users)
    if k_c == 0:
        return Grouping(distributed=tuple(users))
    if k_c == num_users:
        return Grouping(centralized=tuple(users))

    features = np.asarray(beta, dtype=float).T
    model = CosineKMeans()
    labels = model.fit_predict(features)
    spread = [mean_pairwise_distance(features, np.flatnonzero(labels == c)) for c in range(2)]
    chosen = int(np.argmin(spread))

    to_center = cosine_distances(features, model.cluster_centers_[chosen][None, :])[:, 0]
    order = np.lexsort((users, to_center))
    centralized = np.sort(order[:k_c])
    distributed = np.setdiff1d(users, centralized)
    logger.debug(
        "K-means: %d iterations, cluster sizes %s, chosen %d",
        model.n_iter_, np.bincount(labels, minlength=2).tolist(), chosen,
    )
    return Grouping(centralized=tuple(centralized), distributed=tuple(distributed))
