"""Shipped H-function catalog and the numeric convolution constructor."""

import logging

import numpy as np
from scipy.integrate import trapezoid

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_dist = load_module("src.numeric.continuous-distributions")
_hf = load_module("src.hfunc.h-functions")

Distribution = _dist.Distribution
HFunction = _hf.HFunction
Association = _hf.Association
Construction = _hf.Construction

logger = logging.getLogger(__name__)

_CFG = _config.section("estimation", "hfunc")
_CHUNK = 256

NORMAL_RHO = "normal_rho"
EXP_GAMMA = "exp_gamma"
UNIFORM_TRIANGULAR = "uniform_triangular"
NEG_HALF_GAMMA = "neg_half_gamma"
PROJECTION = "projection"
CUSTOM = "custom"


def normal_rho_grid(
    lo: float = float(_CFG.get("rho_grid_min", 0.125)),
    hi: float = float(_CFG.get("rho_grid_max", 8.0)),
    points: int = int(_CFG.get("rho_grid_points", 17)),
) -> np.ndarray:
    """Log-spaced rho values (1/8 .. 8 in 17 points by default)."""
    return np.geomspace(lo, hi, points)


def normal_rho(rho: float, association=Association.POSITIVE) -> HFunction:
    return HFunction(construction=Construction.NORMAL_RHO, rho=float(rho),
                     association=Association(association), family=NORMAL_RHO)


def exp_gamma(association=Association.POSITIVE) -> HFunction:
    """Exp(1) + Exp(1) -> Gamma(2, 1)."""
    return HFunction(construction=Construction.CONVOLUTION, family=EXP_GAMMA,
                     association=Association(association),
                     f1=Distribution.exponential(1.0), f2=Distribution.exponential(1.0),
                     f12=Distribution.gamma(2.0, 1.0))


def uniform_triangular(association=Association.POSITIVE) -> HFunction:
    """U(0,1) + U(0,1) -> Triangular(0, 1, 2)."""
    return HFunction(construction=Construction.CONVOLUTION, family=UNIFORM_TRIANGULAR,
                     association=Association(association),
                     f1=Distribution.uniform(0.0, 1.0), f2=Distribution.uniform(0.0, 1.0),
                     f12=Distribution.triangular(0.0, 1.0, 2.0))


def neg_half_gamma(association=Association.POSITIVE) -> HFunction:
    """Two negated Gamma(1/2, 1) summands; their sum is -Exp(1) with CDF e^z on z < 0."""
    return HFunction(construction=Construction.CONVOLUTION, family=NEG_HALF_GAMMA,
                     association=Association(association),
                     f1=Distribution.neg_half_gamma(), f2=Distribution.neg_half_gamma(),
                     f12=Distribution.neg_gamma(1.0, 1.0))


def projection(axis: int, association=Association.POSITIVE) -> HFunction:
    return HFunction(construction=Construction.PROJECTION, axis=axis,
                     association=Association(association), family=PROJECTION)


_BUILDERS = {
    EXP_GAMMA: exp_gamma,
    UNIFORM_TRIANGULAR: uniform_triangular,
    NEG_HALF_GAMMA: neg_half_gamma,
}


def family_members(family: str, associations=tuple(Association), rho_grid=None) -> list[HFunction]:
    """All catalog members of one family across the given associations."""
    associations = [Association(a) for a in associations]
    if family == NORMAL_RHO:
        grid = normal_rho_grid() if rho_grid is None else rho_grid
        return [normal_rho(r, a) for a in associations for r in grid]
    if family == PROJECTION:
        return [projection(axis, a) for axis in (1, 2) for a in associations]
    if family in _BUILDERS:
        return [_BUILDERS[family](a) for a in associations]
    raise ValueError(f"unknown H-function family {family!r}")


def catalog(associations=tuple(Association), include_projections: bool = True, rho_grid=None) -> list[HFunction]:
    """Every shipped H-function crossed with every requested association."""
    families = [NORMAL_RHO, EXP_GAMMA, UNIFORM_TRIANGULAR, NEG_HALF_GAMMA]
    if include_projections:
        families.append(PROJECTION)
    return [h for fam in families for h in family_members(fam, associations, rho_grid)]


def family_candidates(h: HFunction) -> list[HFunction]:
    """Candidates sharing ``h``'s F1/F2 family, with any association.

    Custom convolution pairs keep their own distributions and vary only the
    association.
    """
    if h.family in (NORMAL_RHO, PROJECTION, *_BUILDERS):
        return family_members(h.family)
    return [h.with_association(a) for a in Association]


def numeric_convolution(
    f1,
    f2,
    association=Association.POSITIVE,
    points: int = int(_CFG.get("convolution_points", 4096)),
    tail: float = float(_CFG.get("convolution_tail", 1e-8)),
) -> HFunction:
    """Convolution H-function whose F12 is tabulated by trapezoid quadrature.

    F12(z) = integral over u in (0,1) of F1(z - F2^-1(u)), evaluated on a
    ``points``-long z-grid spanning the ``tail`` quantile range of the sum.
    """
    z = np.linspace(f1.quantile(tail) + f2.quantile(tail),
                    f1.quantile(1.0 - tail) + f2.quantile(1.0 - tail), points)
    u = np.linspace(tail, 1.0 - tail, points)
    q2 = f2.quantile(u)
    cdf = np.empty(points)
    for start in range(0, points, _CHUNK):
        stop = min(start + _CHUNK, points)
        inner = f1.cdf(z[start:stop, None] - q2[None, :])
        cdf[start:stop] = trapezoid(inner, u, axis=1) / (u[-1] - u[0])
    cdf = np.clip(np.maximum.accumulate(cdf), 0.0, 1.0)
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    logger.info("Tabulated convolution of %s and %s on %d points", f1.label, f2.label, int(keep.sum()))
    return HFunction(construction=Construction.CONVOLUTION, family=CUSTOM,
                     association=Association(association), f1=f1, f2=f2,
                     f12=Distribution.tabulated(z[keep], cdf[keep]))
