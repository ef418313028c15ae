"""H-functions: maps (0,1)^2 -> (0,1) monotone in each argument and uniform-preserving.

Association is an input transform applied before the construction:
negative flips both inputs, simpson_x flips the first, simpson_y the second.
"""

from __future__ import annotations

from enum import Enum
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.special import ndtr, ndtri

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_dist = load_module("src.numeric.continuous-distributions")

Distribution = _dist.Distribution

OUTPUT_CLIP = float(_config.section("estimation", "hfunc").get("output_clip", 1e-15))


class Association(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    SIMPSON_X = "simpson_x"
    SIMPSON_Y = "simpson_y"

    def flip(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        if self in (Association.NEGATIVE, Association.SIMPSON_X):
            x = 1.0 - x
        if self in (Association.NEGATIVE, Association.SIMPSON_Y):
            y = 1.0 - y
        return x, y


class Construction(str, Enum):
    CONVOLUTION = "convolution"
    NORMAL_RHO = "normal_rho"
    PROJECTION = "projection"


def check_unit_interval(*args) -> None:
    """Raise ValueError unless every argument lies strictly inside (0, 1)."""
    for a in args:
        arr = np.asarray(a, dtype=float)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise ValueError("H-function inputs must lie strictly inside (0, 1)")


def clip_unit(values) -> np.ndarray:
    return np.clip(values, OUTPUT_CLIP, 1.0 - OUTPUT_CLIP)


class HFunction(BaseModel):
    """A tagged H-function record.

    ``convolution`` evaluates F12(F1^-1(x') + F2^-1(y')); ``normal_rho``
    evaluates Phi((Phi^-1(x') + rho Phi^-1(y')) / sqrt(1 + rho^2));
    ``projection`` returns x' (axis 1) or y' (axis 2).
    """
    construction: Construction
    association: Association = Association.POSITIVE
    family: str = ""
    f1: Distribution | None = None
    f2: Distribution | None = None
    f12: Distribution | None = None
    rho: float | None = Field(default=None, gt=0)
    axis: Literal[1, 2] | None = None

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_construction(self) -> HFunction:
        if self.construction is Construction.CONVOLUTION and None in (self.f1, self.f2, self.f12):
            raise ValueError("convolution H-function needs f1, f2 and f12")
        if self.construction is Construction.NORMAL_RHO and self.rho is None:
            raise ValueError("normal_rho H-function needs rho > 0")
        if self.construction is Construction.PROJECTION and self.axis is None:
            raise ValueError("projection H-function needs axis 1 or 2")
        return self

    def evaluate(self, x, y):
        """H(x, y) in (0, 1); broadcasts over arrays."""
        check_unit_interval(x, y)
        xa, ya = self.association.flip(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        match self.construction:
            case Construction.CONVOLUTION:
                out = self.f12.cdf(self.f1.quantile(xa) + self.f2.quantile(ya))
            case Construction.NORMAL_RHO:
                out = ndtr((ndtri(xa) + self.rho * ndtri(ya)) / np.sqrt(1.0 + self.rho**2))
            case _:
                out = np.broadcast_to(xa if self.axis == 1 else ya, np.broadcast(xa, ya).shape)
        out = clip_unit(np.asarray(out, dtype=float))
        return float(out) if out.ndim == 0 else out

    def normal_scores(self, x, y) -> np.ndarray:
        """Phi^-1(H(x, y))."""
        return ndtri(np.asarray(self.evaluate(x, y)))

    def with_association(self, association: Association | str) -> HFunction:
        return self.model_copy(update={"association": Association(association)})

    @property
    def name(self) -> str:
        if self.construction is Construction.NORMAL_RHO:
            base = f"normal_rho({self.rho:.4g})"
        elif self.construction is Construction.PROJECTION:
            base = f"projection({self.axis})"
        else:
            base = self.family or f"{self.f1.label}+{self.f2.label}"
        return f"{base}/{self.association.value}"
