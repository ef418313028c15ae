"""Rank-one nonnegative matrix factorization.

Dense inputs use the leading singular triple: for a positive matrix the
Perron vectors are one-signed, so their absolute values give the
nonnegative optimum. Masked inputs use alternating least squares over the
unmasked entries, warm-started from the dense solution.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")

logger = logging.getLogger(__name__)

_CFG = _config.section("estimation", "numeric")
_MAX_SWEEPS = int(_CFG.get("nmf_max_sweeps", 1000))
_TOLERANCE = float(_CFG.get("nmf_tolerance", 1e-10))


@dataclass(frozen=True)
class RankOneFactors:
    """``a b'`` approximation with mean(log a) == 0."""
    a: np.ndarray
    b: np.ndarray
    residual: float      # Frobenius norm over unmasked entries
    iterations: int
    converged: bool

    def reconstruct(self) -> np.ndarray:
        return np.outer(self.a, self.b)


def _normalize(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scale = np.exp(np.mean(np.log(a)))
    return a / scale, b * scale


def _leading_triple(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return np.abs(u[:, 0]) * s[0], np.abs(vt[0])


def _masked_residual(m, a, b, keep) -> float:
    diff = np.where(keep, m - np.outer(a, b), 0.0)
    return float(np.sqrt(np.sum(diff * diff)))


def rank_one_factorize(
    m: np.ndarray,
    mask: np.ndarray | None = None,
    max_sweeps: int = _MAX_SWEEPS,
    tolerance: float = _TOLERANCE,
) -> RankOneFactors:
    """Factor a positive matrix as ``a b'`` over the unmasked entries.

    Args:
        m: Matrix with strictly positive unmasked entries.
        mask: Optional boolean matrix, True where the entry is excluded.
        max_sweeps: ALS sweep cap (masked case).
        tolerance: Relative objective change that ends ALS.

    Returns:
        RankOneFactors; ``converged`` is False when the sweep cap was hit.

    Raises:
        ValueError: non-positive or non-finite unmasked entry.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    keep = np.ones(m.shape, dtype=bool) if mask is None else ~np.asarray(mask, dtype=bool)
    vals = m[keep]
    if vals.size == 0:
        raise ValueError("rank-one factorization needs at least one unmasked entry")
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        bad = np.argwhere(keep & ~(np.isfinite(m) & (m > 0)))[0]
        raise ValueError(f"entry ({bad[0]}, {bad[1]}) must be finite and strictly positive")

    if keep.all():
        a, b = _leading_triple(m)
        a, b = _normalize(a, b)
        return RankOneFactors(a, b, _masked_residual(m, a, b, keep), 1, True)

    filled = np.where(keep, m, vals.mean())
    a, b = _leading_triple(filled)
    w = keep.astype(float)
    mk = np.where(keep, m, 0.0)
    previous = np.inf
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        denom_a = w @ (b * b)
        a = np.where(denom_a > 0, (mk @ b) / np.where(denom_a > 0, denom_a, 1.0), a)
        denom_b = w.T @ (a * a)
        b = np.where(denom_b > 0, (mk.T @ a) / np.where(denom_b > 0, denom_b, 1.0), b)
        current = _masked_residual(m, a, b, keep) ** 2
        if current == 0.0 or (np.isfinite(previous) and abs(previous - current) <= tolerance * previous):
            converged = True
            break
        previous = current
    if not converged:
        logger.warning("Rank-one ALS hit %d sweeps without converging (objective %.3e)", max_sweeps, previous)
    a, b = _normalize(np.abs(a), np.abs(b))
    return RankOneFactors(a, b, _masked_residual(m, a, b, keep), sweeps, converged)
