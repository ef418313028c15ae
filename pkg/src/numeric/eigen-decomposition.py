"""Eigen decomposition of general square matrices with a deterministic ordering."""

import numpy as np
from scipy import linalg


def _fix_phase(vecs: np.ndarray) -> np.ndarray:
    """Rotate each eigenvector so its largest-modulus entry is real and positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    pivot = vecs[idx, np.arange(vecs.shape[1])]
    phase = np.where(np.abs(pivot) > 0, pivot / np.abs(pivot), 1.0)
    return vecs / phase


def eigen_real_parts(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues sorted by |Re| descending and the real parts of their eigenvectors.

    Ties are broken by imaginary part, then by original index. Eigenvector
    ``k`` is column ``k`` of the returned matrix.

    Raises:
        ValueError: non-square or non-finite input.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"eigen decomposition needs a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("eigen decomposition needs finite entries")
    vals, vecs = linalg.eig(m)
    order = np.lexsort((np.arange(vals.size), vals.imag, -np.abs(vals.real)))
    vecs = _fix_phase(vecs[:, order])
    return vals[order], np.real(vecs)
