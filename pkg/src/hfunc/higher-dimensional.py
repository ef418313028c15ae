"""Three-argument H-functions: additive normal noise, failure, and chaining."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import ndtr, ndtri

from src.kebab_module_loader import load_module

_hf = load_module("src.hfunc.h-functions")
_catalog = load_module("src.hfunc.h-function-catalog")

HFunction = _hf.HFunction


def eval_noisy(h: HFunction, x, y, eta, sigma: float):
    """Phi(Phi^-1(h(x,y)) / sqrt(1+s^2) + s Phi^-1(eta) / sqrt(1+s^2)) with s = sigma."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    _hf.check_unit_interval(eta)
    signal = h.evaluate(x, y)
    if sigma == 0:
        return signal
    scale = 1.0 / np.sqrt(1.0 + sigma * sigma)
    out = _hf.clip_unit(ndtr(scale * ndtri(signal) + sigma * scale * ndtri(np.asarray(eta, dtype=float))))
    return float(out) if np.ndim(out) == 0 else out


class FailureSpec(BaseModel):
    """Failure model h(x,y)^alpha * delta^(1-alpha)."""
    alpha: float = Field(..., ge=0.0, le=1.0)
    base: HFunction

    model_config = {"frozen": True}


def eval_failure(spec: FailureSpec, x, y, eta):
    """h^alpha scaled by delta^(1-alpha) = min(eta / (1 - alpha), 1).

    With probability alpha the edge sits exactly at h^alpha; otherwise it
    is h^alpha times an independent uniform.
    """
    _hf.check_unit_interval(eta)
    alpha = spec.alpha
    e = np.asarray(eta, dtype=float)
    if alpha >= 1.0:
        factor = np.ones_like(e)
    else:
        factor = np.minimum(e / (1.0 - alpha), 1.0)
    base = np.asarray(spec.base.evaluate(x, y))
    out = _hf.clip_unit(np.power(base, alpha) * factor)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ChainedHFunction:
    """(x, y, eta) -> outer(inner(x, y), eta)."""
    outer: HFunction
    inner: HFunction

    def evaluate(self, x, y, eta):
        return self.outer.evaluate(self.inner.evaluate(x, y), eta)


def chain(outer: HFunction, inner: HFunction) -> ChainedHFunction:
    return ChainedHFunction(outer=outer, inner=inner)


def noisy_as_chain(h: HFunction, sigma: float) -> ChainedHFunction:
    """The additive-noise model written as ``normal_rho(sigma)`` chained after ``h``."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    outer = _catalog.normal_rho(sigma) if sigma > 0 else _catalog.projection(1)
    return chain(outer, h)
