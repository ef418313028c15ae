"""Spectral clustering with the number of communities chosen by the measure L."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_streams = load_module("src.numeric.random-streams")
_kmeans = load_module("src.numeric.kmeans-clustering")
_net = load_module("src.model.network-schemas")
_measure = load_module("src.community.measure-l")

Stream = _streams.Stream
CommunityAssignment = _net.CommunityAssignment

logger = logging.getLogger(__name__)

_CFG = _config.section("community", "spectral")
DEFAULT_REPLICATES = int(_CFG.get("replicates", 10))
# Kernel widths tried in turn across replicates, as quantiles of the pairwise row distances.
SCALE_QUANTILES = tuple(float(q) for q in _CFG.get("scale_quantiles", (0.5, 0.2, 0.1, 0.05)))


@dataclass(frozen=True, eq=False)
class Selection:
    """Clustering kept by the L stopping rule; ``scores[k - 1]`` is the best L at k communities."""
    labels: np.ndarray
    k: int
    score: float
    scores: tuple[float, ...]


def standardized_rows(w: np.ndarray) -> np.ndarray:
    """Each row centred and scaled over its off-diagonal entries; the diagonal stays 0.

    Removes a node's overall level and spread, so rows compare by pattern
    rather than by degree. Constant rows are only centred.
    """
    n = w.shape[0]
    off = ~np.eye(n, dtype=bool)
    vals = w[off].reshape(n, n - 1)
    mean = vals.mean(axis=1, keepdims=True)
    sd = vals.std(axis=1, ddof=1, keepdims=True) if n > 2 else np.ones((n, 1))
    z = (w - mean) / np.where(sd > 0, sd, 1.0)
    np.fill_diagonal(z, 0.0)
    return z


def row_distances(w: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance between rows, ignoring the two rows' own coordinates.

    Assumes a zero diagonal.
    """
    d2 = cdist(w, w, "sqeuclidean") - w * w - (w * w).T
    d2 = np.clip(d2, 0.0, None)
    np.fill_diagonal(d2, 0.0)
    return d2


def rbf_affinity(w: np.ndarray, scale_quantile: float = 0.5) -> np.ndarray:
    """Gaussian kernel on standardized-row distances.

    The kernel width is the ``scale_quantile`` quantile of the off-diagonal
    distances.
    """
    if not 0.0 < scale_quantile <= 1.0:
        raise ValueError(f"scale_quantile must lie in (0, 1], got {scale_quantile}")
    d2 = row_distances(standardized_rows(np.asarray(w, dtype=float)))
    off = np.sqrt(d2[~np.eye(d2.shape[0], dtype=bool)])
    scale = float(np.quantile(off, scale_quantile)) if off.size else 0.0
    if scale <= 0:
        scale = 1.0
    affinity = np.exp(-d2 / (2.0 * scale * scale))
    np.fill_diagonal(affinity, 0.0)
    return affinity


def spectral_basis(w: np.ndarray, scale_quantile: float = 0.5) -> np.ndarray:
    """Eigenvectors of the normalized Laplacian, smallest eigenvalue first."""
    laplacian = csgraph.laplacian(rbf_affinity(w, scale_quantile), normed=True)
    _, vecs = np.linalg.eigh(laplacian)
    return vecs


def spectral_points(basis: np.ndarray, k: int) -> np.ndarray:
    """First ``k`` eigenvectors with unit-length rows."""
    x = basis[:, :k]
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return x / np.where(norms > 0, norms, 1.0)


def select_by_l(w: np.ndarray, present: np.ndarray, cluster, replicates: int, max_k: int) -> Selection:
    """Grow k from 1 and stop at the first k whose best L does not beat k - 1's.

    ``cluster(k, r)`` returns labels for replicate ``r`` at ``k`` communities;
    the best-scoring replicate per k is kept.
    """
    if replicates < 1:
        raise ValueError(f"replicates must be positive, got {replicates}")
    best_labels = np.ones(w.shape[0], dtype=int)
    best_score = -np.inf
    scores: list[float] = []
    workers = _config.worker_count()
    for k in range(1, max_k + 1):
        reps = 1 if k == 1 else replicates
        with ThreadPoolExecutor(max_workers=workers) as pool:
            candidates = list(pool.map(lambda r, k=k: cluster(k, r), range(reps)))
        values = [_measure.score_labels(w, present, labels).value for labels in candidates]
        top = int(np.argmax(values))
        scores.append(values[top])
        logger.debug("k=%d: best L %.6g over %d replicates", k, values[top], reps)
        if values[top] - best_score <= 0:
            break
        best_labels, best_score = candidates[top], values[top]
    k_final = int(np.unique(best_labels).size)
    return Selection(labels=best_labels, k=k_final, score=float(best_score), scores=tuple(scores))


def spectral_communities(net, replicates: int = DEFAULT_REPLICATES, seed: int = 0) -> CommunityAssignment:
    """Spectral clustering for k = 1, 2, ... with the L stopping rule.

    Rows are standardized, then compared on the coordinates other than the
    two nodes' own. Replicate ``r`` uses the RBF width at
    ``SCALE_QUANTILES[r % len(SCALE_QUANTILES)]``; k-means runs on the
    row-normalized leading eigenvectors of the symmetric normalized Laplacian.

    Raises:
        ValueError: fewer than 3 nodes.
    """
    if net.n < 3:
        raise ValueError(f"spectral detection needs at least 3 nodes, got {net.n}")
    w, present = _measure.observed_weights(net)
    widths = SCALE_QUANTILES[:max(1, min(replicates, len(SCALE_QUANTILES)))]
    bases = [spectral_basis(w, q) for q in widths]

    def cluster(k: int, r: int) -> np.ndarray:
        if k == 1:
            return np.ones(net.n, dtype=int)
        return _kmeans.kmeans_cluster(spectral_points(bases[r % len(bases)], k), k,
                                      seed=_streams.derive_seed(seed, Stream.SPECTRAL, k, r))

    selection = select_by_l(w, present, cluster, replicates, net.n)
    logger.info("Spectral detection chose %d communities (L=%.6g)", selection.k, selection.score)
    return CommunityAssignment.from_labels(selection.labels)
