"""Weighted network and community assignment types plus invariant validation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.kebab_module_loader import load_module

_kmeans = load_module("src.numeric.kmeans-clustering")

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightedNetwork:
    """Symmetric n x n weight matrix; ``missing`` is True where an edge is absent.

    Arrays are copied and made read-only on construction. Invariants are
    checked by ``validate`` rather than enforced here so bad input can be
    reported entry by entry.
    """
    weights: np.ndarray
    missing: np.ndarray | None = None

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be a square matrix, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.missing is not None:
            m = np.array(self.missing, dtype=bool)
            if m.shape != w.shape:
                raise ValueError(f"missing mask shape {m.shape} does not match weights {w.shape}")
            if not m.any():
                m = None
            else:
                m.setflags(write=False)
            object.__setattr__(self, "missing", m)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def has_missing(self) -> bool:
        return self.missing is not None

    def missing_mask(self) -> np.ndarray:
        return np.zeros((self.n, self.n), dtype=bool) if self.missing is None else self.missing

    def present_mask(self) -> np.ndarray:
        """Off-diagonal entries that carry an observed weight."""
        return ~self.missing_mask() & ~np.eye(self.n, dtype=bool)

    def missing_fraction(self) -> float:
        off = self.n * (self.n - 1)
        return float(self.missing_mask().sum()) / off if off else 0.0


@dataclass(frozen=True)
class Violation:
    kind: str
    i: int
    j: int
    message: str = field(default="")


def validate(net: WeightedNetwork) -> list[Violation]:
    """All invariant violations; empty iff the network is well formed.

    Checks finiteness, exact symmetry of weights and mask, a zero diagonal
    and a diagonal that is never marked missing. Pairs are reported once
    with ``i < j``.
    """
    w = net.weights
    out: list[Violation] = []
    for i, j in np.argwhere(~np.isfinite(w)):
        out.append(Violation("non_finite", int(i), int(j), f"W[{i},{j}] = {w[i, j]}"))
    upper = np.triu(np.ones_like(w, dtype=bool), k=1)
    for i, j in np.argwhere(upper & (w != w.T) & np.isfinite(w) & np.isfinite(w.T)):
        out.append(Violation("symmetry", int(i), int(j), f"W[{i},{j}] = {w[i, j]!r} != W[{j},{i}] = {w[j, i]!r}"))
    for i in np.flatnonzero(np.diag(w) != 0):
        out.append(Violation("diagonal", int(i), int(i), f"W[{i},{i}] = {w[i, i]!r}; self-loops must be zero"))
    if net.missing is not None:
        m = net.missing
        for i, j in np.argwhere(upper & (m != m.T)):
            out.append(Violation("missing_symmetry", int(i), int(j), f"mask differs at ({i},{j}) and ({j},{i})"))
        for i in np.flatnonzero(np.diag(m)):
            out.append(Violation("missing_diagonal", int(i), int(i), f"diagonal entry {i} marked missing"))
    if out:
        logger.debug("Network failed validation with %d violations", len(out))
    return out


class CommunityAssignment(BaseModel):
    """Community id (1..K) per node; every community non-empty."""
    labels: list[int] = Field(..., min_length=1)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_labels(self) -> CommunityAssignment:
        ids = set(self.labels)
        k = max(ids)
        if min(ids) < 1 or ids != set(range(1, k + 1)):
            raise ValueError(f"community ids must cover 1..{k} without gaps, got {sorted(ids)}")
        return self

    @classmethod
    def from_labels(cls, labels) -> CommunityAssignment:
        """Canonical assignment numbering arbitrary ids by first appearance."""
        return cls(labels=_kmeans.relabel_by_appearance(labels).tolist())

    @classmethod
    def single(cls, n: int) -> CommunityAssignment:
        return cls(labels=[1] * n)

    @property
    def k(self) -> int:
        return max(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=int)

    def members(self, i: int) -> np.ndarray:
        """Sorted node indices of community ``i``."""
        if not 1 <= i <= self.k:
            raise ValueError(f"community {i} outside 1..{self.k}")
        return np.flatnonzero(self.as_array() == i)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.as_array(), minlength=self.k + 1)[1:]

    def pairs(self) -> list[tuple[int, int]]:
        """Unordered community pairs (i <= j) in row-major order."""
        return [(i, j) for i in range(1, self.k + 1) for j in range(i, self.k + 1)]


def place_block(target: np.ndarray, rows: np.ndarray, cols: np.ndarray, block: np.ndarray, within: bool) -> None:
    """Write a pair block into a symmetric matrix.

    Within blocks contribute their strict upper triangle, mirrored; between
    blocks fill (rows, cols) and the transpose.
    """
    if within:
        iu, ju = np.triu_indices(rows.size, k=1)
        target[rows[iu], rows[ju]] = block[iu, ju]
        target[rows[ju], rows[iu]] = block[iu, ju]
    else:
        target[np.ix_(rows, cols)] = block
        target[np.ix_(cols, rows)] = block.T
