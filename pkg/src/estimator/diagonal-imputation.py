"""Self-loop imputation for within-community blocks before factorization."""

import numpy as np


def impute_diagonal(block: np.ndarray) -> np.ndarray:
    """Fill W_uu with twice the node's mean edge weight minus the block's mean edge weight.

    W_uu = [2 * sum_{v != u} W_uv - (1/(n-2)) * sum_{v != u} sum_{q != u, v} W_vq] / (n - 1)

    Raises:
        ValueError: non-square block or fewer than 3 nodes.
    """
    w = np.array(block, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"within-community block must be square, got shape {w.shape}")
    n = w.shape[0]
    if n < 3:
        raise ValueError(f"diagonal imputation needs at least 3 nodes, got {n}")
    np.fill_diagonal(w, 0.0)
    row = w.sum(axis=1)
    col = w.sum(axis=0)
    others = w.sum() - row - col
    np.fill_diagonal(w, (2.0 * row - others / (n - 2)) / (n - 1))
    return w
