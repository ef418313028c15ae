"""Row-normalized eigenvector embedding of a network and clustering on it."""

import logging

import numpy as np

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_streams = load_module("src.numeric.random-streams")
_stats = load_module("src.numeric.statistics-utils")
_eigen = load_module("src.numeric.eigen-decomposition")
_kmeans = load_module("src.numeric.kmeans-clustering")
_net = load_module("src.model.network-schemas")
_measure = load_module("src.community.measure-l")
_spectral = load_module("src.community.spectral-communities")

Stream = _streams.Stream
CommunityAssignment = _net.CommunityAssignment

logger = logging.getLogger(__name__)


def row_normalize(w: np.ndarray) -> np.ndarray:
    """(A_uv - mean_u) / SD_u per row, diagonal included.

    Raises:
        ValueError: a row has zero standard deviation.
    """
    sd = _stats.sample_sd(w, axis=1)
    flat = np.flatnonzero(~(sd > 0))
    if flat.size:
        raise ValueError(f"node {int(flat[0])} has a constant weight row; cannot normalize")
    return (w - w.mean(axis=1, keepdims=True)) / sd[:, None]


def normalized_embedding(net, dims: int | None = None) -> tuple[np.ndarray, int]:
    """Coordinates from the real parts of the leading eigenvectors of the row-normalized network.

    Eigenvalues are ordered by |Re| descending; the dimension d is the
    position of the largest drop between consecutive |Re| values unless
    ``dims`` fixes it.

    Returns:
        (n x d coordinates, d)

    Raises:
        ValueError: fewer than 2 nodes, or ``dims`` outside 1..n.
    """
    w, _ = _measure.observed_weights(net)
    if net.n < 2:
        raise ValueError(f"embedding needs at least 2 nodes, got {net.n}")
    if dims is not None and not 1 <= dims <= net.n:
        raise ValueError(f"dims must lie in 1..{net.n}, got {dims}")
    values, vectors = _eigen.eigen_real_parts(row_normalize(w))
    magnitude = np.abs(values.real)
    d = dims if dims is not None else int(np.argmax(magnitude[:-1] - magnitude[1:])) + 1
    logger.debug("Embedding dimension %d (|Re lambda| = %s)", d, np.round(magnitude[: d + 1], 4).tolist())
    return vectors[:, :d], d


def embedding_communities(net, replicates: int = _spectral.DEFAULT_REPLICATES, seed: int = 0) -> CommunityAssignment:
    """k-means on the normalized embedding with the L stopping rule over k."""
    points, _ = normalized_embedding(net)
    w, present = _measure.observed_weights(net)

    def cluster(k: int, r: int) -> np.ndarray:
        if k == 1:
            return np.ones(net.n, dtype=int)
        return _kmeans.kmeans_cluster(points, k, seed=_streams.derive_seed(seed, Stream.EMBEDDING, k, r))

    selection = _spectral.select_by_l(w, present, cluster, replicates, net.n)
    logger.info("Embedding detection chose %d communities (L=%.6g)", selection.k, selection.score)
    return CommunityAssignment.from_labels(selection.labels)
