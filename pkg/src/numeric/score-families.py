"""Zero-mean unit-variance score transforms of U(0,1) and their maximum-likelihood fits."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats
from scipy.special import ndtr, ndtri

_SQRT12 = np.sqrt(12.0)


class ScoreFamily(str, Enum):
    """Families for h1, h2 in the linear sociability model."""
    NORMAL = "normal"
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"

    def transform(self, psi) -> np.ndarray:
        """h(psi): standardized score of a U(0,1) sociability."""
        p = np.asarray(psi, dtype=float)
        if self is ScoreFamily.NORMAL:
            return ndtri(p)
        if self is ScoreFamily.EXPONENTIAL:
            return -np.log1p(-p) - 1.0
        return (p - 0.5) * _SQRT12

    def inverse(self, score) -> np.ndarray:
        """psi such that transform(psi) == score."""
        s = np.asarray(score, dtype=float)
        if self is ScoreFamily.NORMAL:
            return ndtr(s)
        if self is ScoreFamily.EXPONENTIAL:
            return -np.expm1(-(s + 1.0))
        return s / _SQRT12 + 0.5

    @property
    def scipy_family(self):
        return {"normal": stats.norm, "exponential": stats.expon, "uniform": stats.uniform}[self.value]


@dataclass(frozen=True)
class FamilyFit:
    family: ScoreFamily
    loc: float
    scale: float
    log_likelihood: float

    def cdf(self, x) -> np.ndarray:
        return self.family.scipy_family.cdf(np.asarray(x, dtype=float), loc=self.loc, scale=self.scale)


def fit_family(family: ScoreFamily, samples) -> FamilyFit:
    """Maximum-likelihood location/scale fit of ``family`` to ``samples``."""
    x = np.asarray(samples, dtype=float)
    loc, scale = family.scipy_family.fit(x)
    loglik = float(np.sum(family.scipy_family.logpdf(x, loc=loc, scale=scale)))
    return FamilyFit(family, float(loc), float(scale), loglik)


def select_family(families, samples) -> FamilyFit:
    """Best family by log-likelihood; earlier families win ties.

    Raises:
        ValueError: empty family list.
    """
    families = [ScoreFamily(f) for f in families]
    if not families:
        raise ValueError("at least one candidate family is required")
    fits = [fit_family(f, samples) for f in families]
    return max(fits, key=lambda fit: (np.nan_to_num(fit.log_likelihood, nan=-np.inf), -fits.index(fit)))
