"""Small statistics helpers shared across estimators and community scoring."""

import numpy as np


def sample_sd(values, axis=None) -> float | np.ndarray:
    """Standard deviation with the sample convention (divide by count - 1)."""
    return np.std(np.asarray(values, dtype=float), axis=axis, ddof=1)


def pearson_or_zero(x, y) -> float:
    """Pearson correlation; 0.0 when either side has zero variance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        return 0.0
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    if denom <= 0.0 or not np.isfinite(denom):
        return 0.0
    return float(np.clip(np.dot(dx, dy) / denom, -1.0, 1.0))


def masked_row_pearson(rows: np.ndarray, target: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Per-row Pearson correlation of ``rows[r]`` against ``target`` over ``mask[r]``.

    Rows with fewer than two masked-in entries or zero variance on either
    side get 0.
    """
    m = mask.astype(float)
    count = m.sum(axis=1)
    safe = np.where(count > 0, count, 1.0)
    t = np.broadcast_to(target, rows.shape)
    mean_x = (rows * m).sum(axis=1) / safe
    mean_t = (t * m).sum(axis=1) / safe
    dx = (rows - mean_x[:, None]) * m
    dt = (t - mean_t[:, None]) * m
    cov = (dx * dt).sum(axis=1)
    denom = np.sqrt((dx * dx).sum(axis=1) * (dt * dt).sum(axis=1))
    ok = (count >= 2) & (denom > 0)
    out = np.zeros(rows.shape[0])
    out[ok] = np.clip(cov[ok] / denom[ok], -1.0, 1.0)
    return out


def column_correlations(matrix: np.ndarray, column: int) -> np.ndarray:
    """Pearson correlation of one column against every column (zero variance -> 0)."""
    centered = matrix - matrix.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    dots = centered[:, column] @ centered
    denom = norms[column] * norms
    out = np.zeros(matrix.shape[1])
    ok = denom > 0
    out[ok] = np.clip(dots[ok] / denom[ok], -1.0, 1.0)
    return out
