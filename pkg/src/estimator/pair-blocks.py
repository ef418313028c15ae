"""Community-pair sub-blocks of a network."""

from dataclasses import dataclass

import numpy as np

from src.kebab_module_loader import load_module

_net = load_module("src.model.network-schemas")


@dataclass(frozen=True, eq=False)
class PairBlock:
    """Weights between communities i (rows) and j (cols).

    ``present`` excludes missing entries and, for within blocks, the
    diagonal. ``edge_mask`` keeps each unordered edge once (upper triangle
    for within blocks).
    """
    i: int
    j: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    present: np.ndarray

    @property
    def within(self) -> bool:
        return self.i == self.j

    @property
    def shape(self) -> tuple[int, int]:
        return self.weights.shape

    @property
    def edge_mask(self) -> np.ndarray:
        if self.within:
            return self.present & np.triu(np.ones(self.shape, dtype=bool), k=1)
        return self.present

    @property
    def full_mask(self) -> np.ndarray:
        """Every structural edge position, missing or not."""
        if self.within:
            return np.triu(np.ones(self.shape, dtype=bool), k=1)
        return np.ones(self.shape, dtype=bool)

    @property
    def missing(self) -> np.ndarray:
        return self.full_mask & ~self.edge_mask

    @property
    def has_missing(self) -> bool:
        return bool(self.missing.any())

    def edge_values(self) -> np.ndarray:
        return self.weights[self.edge_mask]

    def with_weights(self, weights: np.ndarray, dense: bool = False) -> "PairBlock":
        """Same layout with new weights; ``dense`` marks every structural edge present."""
        present = self.present
        if dense:
            present = np.ones(self.shape, dtype=bool)
            if self.within:
                np.fill_diagonal(present, False)
        return PairBlock(self.i, self.j, self.rows, self.cols, np.asarray(weights, dtype=float), present)


def extract_block(net, assignment, i: int, j: int) -> PairBlock:
    """Block of ``net`` between communities ``i`` and ``j`` (any order of i, j)."""
    rows, cols = assignment.members(i), assignment.members(j)
    present = net.present_mask()[np.ix_(rows, cols)]
    return PairBlock(i, j, rows, cols, np.array(net.weights[np.ix_(rows, cols)]), present)


def dense_block(weights, within: bool) -> PairBlock:
    """A fully observed block from a bare matrix (within blocks must be square and symmetric)."""
    w = np.asarray(weights, dtype=float)
    if within and (w.shape[0] != w.shape[1]):
        raise ValueError(f"within block must be square, got shape {w.shape}")
    present = np.ones(w.shape, dtype=bool)
    if within:
        np.fill_diagonal(present, False)
    return PairBlock(1, 1 if within else 2, np.arange(w.shape[0]), np.arange(w.shape[1]), w, present)


def symmetrize_upper(values: np.ndarray) -> np.ndarray:
    """Mirror the strict upper triangle of a square block; zero diagonal."""
    out = np.triu(values, k=1)
    return out + out.T


def scatter_blocks(n: int, assignment, blocks) -> np.ndarray:
    """Assemble an n x n symmetric matrix from {(i, j): block} entries."""
    out = np.zeros((n, n))
    for (i, j), block in blocks.items():
        _net.place_block(out, assignment.members(i), assignment.members(j), block, within=i == j)
    return out
