"""Pydantic v2 records for fitted models and generator specifications."""

from __future__ import annotations

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
from scipy.special import ndtri

from src.kebab_module_loader import load_module

_dist = load_module("src.numeric.continuous-distributions")
_ecdf = load_module("src.numeric.empirical-cdf")
_scores = load_module("src.numeric.score-families")
_hf = load_module("src.hfunc.h-functions")
_net = load_module("src.model.network-schemas")

Distribution = _dist.Distribution
EmpiricalCdf = _ecdf.EmpiricalCdf
ScoreFamily = _scores.ScoreFamily
HFunction = _hf.HFunction
CommunityAssignment = _net.CommunityAssignment


def _open_unit(values: list[float], name: str) -> list[float]:
    if any(not 0.0 < v < 1.0 for v in values):
        raise ValueError(f"{name} values must lie strictly inside (0, 1)")
    return values


def _check_pair_cover(pairs, k: int, what: str) -> None:
    expected = {(i, j) for i in range(1, k + 1) for j in range(i, k + 1)}
    seen = [(p.i, p.j) for p in pairs]
    if len(seen) != len(set(seen)) or set(seen) != expected:
        raise ValueError(f"{what} must hold exactly one entry per community pair i <= j "
                         f"({len(expected)} for K={k}), got {sorted(seen)}")


class LsmFit(BaseModel):
    """Linear sociability model fit for one community pair."""
    alpha: float = Field(..., ge=0)
    beta: float = Field(..., ge=0)
    gamma: float = 0.0
    z_i: list[float]
    z_j: list[float]
    psi_i: list[float]
    psi_j: list[float]
    sigma: float = Field(..., ge=0)
    h1: ScoreFamily = ScoreFamily.NORMAL
    h2: ScoreFamily = ScoreFamily.NORMAL
    degenerate: bool = False
    converged: bool = True

    model_config = {"frozen": True}


class PairModel(BaseModel):
    """Fitted artifacts for one community pair (i <= j).

    ``psi_i_wrt_j`` ranks community i's nodes by their weights into j and
    ``psi_j_wrt_i`` the reverse; for i == j they coincide.
    """
    i: int = Field(..., ge=1)
    j: int = Field(..., ge=1)
    g_hat: EmpiricalCdf | None = None
    h_hat: HFunction
    sigma_hat: float = Field(..., ge=0)
    psi_i_wrt_j: list[float]
    psi_j_wrt_i: list[float]
    mse: float = Field(..., ge=0)
    spurious: bool = False
    degenerate: bool = False
    median_weight: float = 0.0
    flagged_i: list[int] = Field(default_factory=list)
    flagged_j: list[int] = Field(default_factory=list)
    iterations: int = 1
    lsm_fit: LsmFit | None = None

    model_config = {"frozen": True}

    @field_validator("psi_i_wrt_j", "psi_j_wrt_i")
    @classmethod
    def psi_in_open_unit(cls, v: list[float]) -> list[float]:
        return _open_unit(v, "psi")

    @model_validator(mode="after")
    def check_pair(self) -> PairModel:
        if self.i > self.j:
            raise ValueError(f"pair indices must satisfy i <= j, got ({self.i}, {self.j})")
        if self.g_hat is None and not self.degenerate:
            raise ValueError(f"pair ({self.i}, {self.j}) has no weight CDF but is not marked degenerate")
        if self.i == self.j and self.psi_i_wrt_j != self.psi_j_wrt_i:
            raise ValueError("within-community pair needs identical psi vectors")
        return self

    @property
    def within(self) -> bool:
        return self.i == self.j

    @property
    def signal_scale(self) -> float:
        return 1.0 / float(np.sqrt(1.0 + self.sigma_hat**2))

    @property
    def medianized(self) -> bool:
        """Smoothing and bootstrap ignore sociability for this pair."""
        return self.spurious or self.degenerate

    def signal_scores(self) -> np.ndarray:
        """Phi^-1(H-hat(psi_u, psi_v)) over the full n_i x n_j block."""
        pi = np.asarray(self.psi_i_wrt_j)[:, None]
        pj = np.asarray(self.psi_j_wrt_i)[None, :]
        return ndtri(np.asarray(self.h_hat.evaluate(pi, pj), dtype=float))


class FittedModel(BaseModel):
    """Community labels plus one PairModel per unordered community pair."""
    assignment: CommunityAssignment
    pairs: list[PairModel]

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_pairs(self) -> FittedModel:
        _check_pair_cover(self.pairs, self.assignment.k, "fitted model")
        sizes = self.assignment.sizes()
        for p in self.pairs:
            if len(p.psi_i_wrt_j) != sizes[p.i - 1] or len(p.psi_j_wrt_i) != sizes[p.j - 1]:
                raise ValueError(f"pair ({p.i}, {p.j}) psi lengths do not match community sizes")
        return self

    def pair(self, i: int, j: int) -> PairModel:
        a, b = min(i, j), max(i, j)
        for p in self.pairs:
            if (p.i, p.j) == (a, b):
                return p
        raise KeyError(f"no pair model for ({i}, {j})")


class PairRecipe(BaseModel):
    """Generation recipe for one community pair of an H-Normal NSM."""
    i: int = Field(..., ge=1)
    j: int = Field(..., ge=1)
    h: HFunction
    sigma: float = Field(0.0, ge=0)
    marginal: Distribution
    external_noise_sd: float | None = Field(default=None, ge=0)
    retention: float | None = Field(default=None, ge=0, le=1)

    model_config = {"frozen": True}


class PsiMode(BaseModel):
    """Sociability draw: i.i.d. uniform (optionally own seed) or explicit values per community."""
    kind: Literal["iid_uniform", "explicit"] = "iid_uniform"
    seed: int | None = Field(default=None, ge=0)
    values: list[list[float]] | None = None

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_values(self) -> PsiMode:
        if self.kind == "explicit":
            if not self.values:
                raise ValueError("explicit psi mode needs values per community")
            for row in self.values:
                _open_unit(row, "explicit psi")
        return self


class GeneratorSpec(BaseModel):
    """Everything needed to draw a network from an H-Normal NSM."""
    assignment: CommunityAssignment
    pairs: list[PairRecipe]
    psi_mode: PsiMode = Field(default_factory=PsiMode)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_spec(self) -> GeneratorSpec:
        _check_pair_cover(self.pairs, self.assignment.k, "generator spec")
        if self.psi_mode.kind == "explicit":
            sizes = self.assignment.sizes().tolist()
            got = [len(r) for r in self.psi_mode.values]
            if got != sizes:
                raise ValueError(f"explicit psi lengths {got} do not match community sizes {sizes}")
        return self

    def recipe(self, i: int, j: int) -> PairRecipe:
        a, b = min(i, j), max(i, j)
        return next(p for p in self.pairs if (p.i, p.j) == (a, b))


class LsmPairRecipe(BaseModel):
    """Linear sociability model recipe: f(W) = gamma + alpha h1(psi_u) + beta h2(psi_v) + sigma eps."""
    i: int = Field(..., ge=1)
    j: int = Field(..., ge=1)
    gamma: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    h1: ScoreFamily = ScoreFamily.NORMAL
    h2: ScoreFamily = ScoreFamily.NORMAL
    sigma: float = Field(0.0, ge=0)
    link: Literal["identity", "log"] = "identity"

    model_config = {"frozen": True}

