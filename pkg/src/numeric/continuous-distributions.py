"""Pydantic v2 continuous distributions with cdf / quantile / sampling via scipy.stats."""

from __future__ import annotations

import logging
from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy import stats
from scipy.special import ndtri

from src.kebab_module_loader import load_module

_streams = load_module("src.numeric.random-streams")

logger = logging.getLogger(__name__)

_REQUIRED: dict[str, tuple[str, ...]] = {
    "normal": ("mean", "variance"),
    "exponential": ("rate",),
    "gamma": ("shape", "rate"),
    "uniform": ("lo", "hi"),
    "neg_gamma": ("shape", "rate"),
    "triangular": ("lo", "mode", "hi"),
    "tabulated": (),
    "empirical": (),
}


class DistributionKind(str, Enum):
    """Supported distribution families."""
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    UNIFORM = "uniform"
    NEG_GAMMA = "neg_gamma"      # reflected gamma, support x < 0
    TRIANGULAR = "triangular"
    TABULATED = "tabulated"      # piecewise-linear CDF on a grid
    EMPIRICAL = "empirical"      # sorted weights + assigned levels


def _scalar_or_array(x, out: np.ndarray):
    return float(out) if np.ndim(x) == 0 else out


class Distribution(BaseModel):
    """A univariate continuous distribution.

    Parametric kinds keep their parameters in ``params``; tabulated and
    empirical kinds keep abscissae in ``grid`` and CDF values in ``table``.
    """
    kind: DistributionKind
    params: dict[str, float] = Field(default_factory=dict)
    grid: list[float] | None = None
    table: list[float] | None = None

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_parameters(self) -> Distribution:
        kind = self.kind.value
        missing = [p for p in _REQUIRED[kind] if p not in self.params]
        if missing:
            raise ValueError(f"{kind} distribution missing parameters {missing}")
        p = self.params
        if kind == "normal" and not p["variance"] > 0:
            raise ValueError(f"normal variance must be positive, got {p['variance']}")
        if kind in ("exponential", "gamma", "neg_gamma") and not p["rate"] > 0:
            raise ValueError(f"{kind} rate must be positive, got {p['rate']}")
        if kind in ("gamma", "neg_gamma") and not p["shape"] > 0:
            raise ValueError(f"{kind} shape must be positive, got {p['shape']}")
        if kind in ("uniform", "triangular") and not p["lo"] < p["hi"]:
            raise ValueError(f"{kind} requires lo < hi, got {p['lo']} >= {p['hi']}")
        if kind == "triangular" and not p["lo"] <= p["mode"] <= p["hi"]:
            raise ValueError(f"triangular mode {p['mode']} outside [{p['lo']}, {p['hi']}]")
        if kind in ("tabulated", "empirical"):
            self._check_table()
        return self

    def _check_table(self) -> None:
        if self.grid is None or self.table is None or len(self.grid) != len(self.table):
            raise ValueError(f"{self.kind.value} distribution needs grid and table of equal length")
        grid = np.asarray(self.grid)
        table = np.asarray(self.table)
        if grid.size == 0 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be non-empty and strictly increasing")
        if np.any(np.diff(table) <= 0):
            raise ValueError("table must be strictly increasing")
        if self.kind is DistributionKind.EMPIRICAL and (table[0] <= 0 or table[-1] >= 1):
            raise ValueError("empirical levels must lie strictly inside (0, 1)")
        if self.kind is DistributionKind.TABULATED and (grid.size < 2 or table[0] < 0 or table[-1] > 1):
            raise ValueError("tabulated CDF needs >= 2 points with values in [0, 1]")

    # ── Constructors ───────────────────────────────────────────────────────────

    @classmethod
    def normal(cls, mean: float = 0.0, variance: float = 1.0) -> Distribution:
        return cls(kind=DistributionKind.NORMAL, params={"mean": mean, "variance": variance})

    @classmethod
    def exponential(cls, rate: float = 1.0) -> Distribution:
        return cls(kind=DistributionKind.EXPONENTIAL, params={"rate": rate})

    @classmethod
    def gamma(cls, shape: float, rate: float = 1.0) -> Distribution:
        return cls(kind=DistributionKind.GAMMA, params={"shape": shape, "rate": rate})

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> Distribution:
        return cls(kind=DistributionKind.UNIFORM, params={"lo": lo, "hi": hi})

    @classmethod
    def neg_gamma(cls, shape: float, rate: float = 1.0) -> Distribution:
        """Distribution of -X for X ~ Gamma(shape, rate); shape 1 gives CDF e^z on z < 0."""
        return cls(kind=DistributionKind.NEG_GAMMA, params={"shape": shape, "rate": rate})

    @classmethod
    def neg_half_gamma(cls) -> Distribution:
        return cls.neg_gamma(0.5, 1.0)

    @classmethod
    def triangular(cls, lo: float, mode: float, hi: float) -> Distribution:
        return cls(kind=DistributionKind.TRIANGULAR, params={"lo": lo, "mode": mode, "hi": hi})

    @classmethod
    def tabulated(cls, grid, table) -> Distribution:
        return cls(kind=DistributionKind.TABULATED, grid=[float(g) for g in grid], table=[float(t) for t in table])

    @classmethod
    def empirical(cls, values, levels) -> Distribution:
        return cls(kind=DistributionKind.EMPIRICAL, grid=[float(v) for v in values],
                   table=[float(t) for t in levels])

    # ── Evaluation ─────────────────────────────────────────────────────────────

    def _frozen(self):
        p = self.params
        match self.kind:
            case DistributionKind.NORMAL:
                return stats.norm(loc=p["mean"], scale=np.sqrt(p["variance"]))
            case DistributionKind.EXPONENTIAL:
                return stats.expon(scale=1.0 / p["rate"])
            case DistributionKind.GAMMA | DistributionKind.NEG_GAMMA:
                return stats.gamma(a=p["shape"], scale=1.0 / p["rate"])
            case DistributionKind.UNIFORM:
                return stats.uniform(loc=p["lo"], scale=p["hi"] - p["lo"])
            case DistributionKind.TRIANGULAR:
                width = p["hi"] - p["lo"]
                return stats.triang(c=(p["mode"] - p["lo"]) / width, loc=p["lo"], scale=width)
        raise ValueError(f"{self.kind.value} has no scipy counterpart")

    def cdf(self, x):
        """F(x); accepts scalars or arrays."""
        xa = np.asarray(x, dtype=float)
        if self.kind is DistributionKind.NEG_GAMMA:
            out = self._frozen().sf(-xa)
        elif self.kind is DistributionKind.TABULATED:
            out = np.interp(xa, self.grid, self.table)
        elif self.kind is DistributionKind.EMPIRICAL:
            idx = np.searchsorted(np.asarray(self.grid), xa, side="right") - 1
            levels = np.asarray(self.table)
            out = np.where(idx >= 0, levels[np.clip(idx, 0, None)], 0.0)
        else:
            out = self._frozen().cdf(xa)
        return _scalar_or_array(x, np.asarray(out, dtype=float))

    def quantile(self, p):
        """F^-1(p) for p strictly inside (0, 1)."""
        pa = np.asarray(p, dtype=float)
        if np.any(~((pa > 0.0) & (pa < 1.0))):
            raise ValueError("quantile argument must lie strictly inside (0, 1)")
        if self.kind is DistributionKind.NEG_GAMMA:
            out = -self._frozen().isf(pa)
        elif self.kind is DistributionKind.TABULATED:
            out = np.interp(pa, self.table, self.grid)
        elif self.kind is DistributionKind.EMPIRICAL:
            out = nearest_normal_score(np.asarray(self.grid), ndtri(np.asarray(self.table)), ndtri(pa))
        else:
            out = self._frozen().ppf(pa)
        return _scalar_or_array(p, np.asarray(out, dtype=float))

    def sample(self, rng: int | np.random.Generator, size=None):
        """Draw from the distribution; deterministic for an integer seed."""
        gen = _streams.as_generator(rng)
        u = gen.random(size)
        # Random() can return exactly 0; keep the quantile argument open
        u = np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
        return self.quantile(u)

    @property
    def label(self) -> str:
        if self.params:
            args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
            return f"{self.kind.value}({args})"
        return f"{self.kind.value}[{len(self.grid or [])}]"


def nearest_normal_score(values: np.ndarray, scores: np.ndarray, targets) -> np.ndarray:
    """For each target z, the value whose normal score is closest (ties to the smaller value).

    ``scores`` must be strictly increasing and aligned with ``values``.
    """
    t = np.asarray(targets, dtype=float)
    hi = np.clip(np.searchsorted(scores, t, side="left"), 0, scores.size - 1)
    lo = np.clip(hi - 1, 0, scores.size - 1)
    pick_lo = np.abs(t - scores[lo]) <= np.abs(scores[hi] - t)
    return np.where(pick_lo, values[lo], values[hi])


def distribution_eval(d: Distribution, which: Literal["cdf", "quantile", "sample"], x):
    """Evaluate ``d`` at ``x``: F(x), F^-1(x), or a draw seeded by ``x``."""
    if which == "cdf":
        return d.cdf(x)
    if which == "quantile":
        return d.quantile(x)
    if which == "sample":
        return float(d.sample(x))
    raise ValueError(f"unknown evaluation {which!r}; expected cdf, quantile or sample")
