"""k-means++ clustering via scikit-learn, labelled 1..k."""

import logging
import warnings

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_streams = load_module("src.numeric.random-streams")

logger = logging.getLogger(__name__)

_CFG = _config.section("community", "kmeans")
DEFAULT_RESTARTS = int(_CFG.get("restarts", 10))
DEFAULT_MAX_ITER = int(_CFG.get("max_iter", 100))


def relabel_by_appearance(labels) -> np.ndarray:
    """Map arbitrary ids to 1..K in order of first appearance."""
    _, first, inverse = np.unique(np.asarray(labels), return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=int)
    rank[np.argsort(first)] = np.arange(1, first.size + 1)
    return rank[inverse.ravel()]


def kmeans_cluster(
    points: np.ndarray,
    k: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int | np.random.Generator = 0,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Best of ``restarts`` k-means++ runs by within-cluster sum of squares.

    Returns:
        Integer labels in 1..k, numbered by first appearance.

    Raises:
        ValueError: k outside 1..m.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    m = x.shape[0]
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in 1..{m}, got {k}")
    if k == m:
        return np.arange(1, m + 1)
    if isinstance(seed, np.random.Generator):
        state = int(seed.integers(0, 2**31 - 1))
    else:
        state = _streams.derive_seed(int(seed))
    with warnings.catch_warnings():
        # Fewer distinct points than k is legal; sklearn only warns.
        warnings.simplefilter("ignore", ConvergenceWarning)
        model = KMeans(n_clusters=k, init="k-means++", n_init=restarts, max_iter=max_iter, random_state=state)
        labels = model.fit_predict(x)
    logger.debug("k-means k=%d inertia=%.6g", k, model.inertia_)
    return relabel_by_appearance(labels)
