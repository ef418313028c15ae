"""Tie-adjusted empirical CDF over edge weights.

Levels use the ``n + 1`` denominator so every normal score is finite. A value
repeated ``m`` times with ``k`` strictly smaller observations sits at
``(k + m/2 + 1/(2m)) / (n + 1)``, which reduces to ``(k + 1)/(n + 1)`` when
``m == 1``: at least halfway between the tied ranks, nudged upward.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, model_validator
from scipy.special import ndtri

from src.kebab_module_loader import load_module

_dist = load_module("src.numeric.continuous-distributions")


def tie_adjusted_levels(weights) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Distinct sorted values, their levels, their counts and the inverse index.

    Raises:
        ValueError: empty or non-finite input.
    """
    w = np.asarray(weights, dtype=float).ravel()
    if w.size == 0:
        raise ValueError("empirical CDF needs at least one weight")
    if not np.all(np.isfinite(w)):
        raise ValueError("empirical CDF weights must be finite")
    values, inverse, counts = np.unique(w, return_inverse=True, return_counts=True)
    below = np.cumsum(counts) - counts
    levels = (below + counts / 2.0 + 1.0 / (2.0 * counts)) / (w.size + 1)
    return values, levels, counts, inverse.ravel()


def rank_levels(values) -> np.ndarray:
    """Tie-adjusted rank level of every element, in input order."""
    _, levels, _, inverse = tie_adjusted_levels(values)
    return levels[inverse]


class EmpiricalCdf(BaseModel):
    """Empirical CDF of one block's weights (G-hat)."""
    values: list[float]
    levels: list[float]
    counts: list[int]
    n: int

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_levels(self) -> EmpiricalCdf:
        if not (len(self.values) == len(self.levels) == len(self.counts)) or not self.values:
            raise ValueError("values, levels and counts must be non-empty and aligned")
        if sum(self.counts) != self.n or min(self.counts) < 1:
            raise ValueError(f"counts must be positive and sum to n={self.n}")
        v = np.asarray(self.values)
        lv = np.asarray(self.levels)
        if np.any(np.diff(v) <= 0):
            raise ValueError("values must be sorted and distinct")
        if np.any(np.diff(lv) <= 0) or lv[0] <= 0 or lv[-1] >= 1:
            raise ValueError("levels must increase strictly inside (0, 1)")
        return self

    def evaluate(self, w):
        """G-hat(w): level of the largest observed value <= w (lowest level below the support)."""
        v = np.asarray(self.values)
        idx = np.clip(np.searchsorted(v, np.asarray(w, dtype=float), side="right") - 1, 0, v.size - 1)
        out = np.asarray(self.levels)[idx]
        return float(out) if np.ndim(w) == 0 else out

    def normal_scores(self, w):
        """Phi^-1(G-hat(w))."""
        return ndtri(self.evaluate(w))

    def inverse_normal(self, z):
        """Observed value whose normal score is nearest ``z``; ties go to the smaller value."""
        out = _dist.nearest_normal_score(np.asarray(self.values), ndtri(np.asarray(self.levels)), z)
        return float(out) if np.ndim(z) == 0 else out

    def median(self) -> float:
        """Observed value at normal score 0 (the lower median on even counts)."""
        return self.inverse_normal(0.0)

    def resample(self, rng: np.random.Generator, size) -> np.ndarray:
        """I.i.d. draws with replacement from the observed weights."""
        p = np.asarray(self.counts, dtype=float) / self.n
        return rng.choice(np.asarray(self.values), size=size, replace=True, p=p)

    def as_distribution(self):
        return _dist.Distribution.empirical(self.values, self.levels)


def empirical_cdf(weights) -> EmpiricalCdf:
    """Build G-hat from a list of weights."""
    values, levels, counts, _ = tie_adjusted_levels(weights)
    return EmpiricalCdf(
        values=values.tolist(),
        levels=levels.tolist(),
        counts=counts.astype(int).tolist(),
        n=int(counts.sum()),
    )
