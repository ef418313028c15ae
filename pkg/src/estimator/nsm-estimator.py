"""Rank-based H-Normal NSM estimation, smooth reconstruction and normal-space MSE.

For a block with normal scores g = Phi^-1(G-hat(W)) and candidate signal
h = Phi^-1(H(psi-hat_u, psi-hat_v)), the signal scale s = 1/sqrt(1+sigma^2)
minimizing sum (g - s h)^2 is the clamped least-squares projection
s* = clamp(<g, h> / <h, h>, [s_min, 1]). The candidate with the smallest
residual sum wins; normal_rho winners get a bounded refinement of rho.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import ndtri

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_hf = load_module("src.hfunc.h-functions")
_catalog = load_module("src.hfunc.h-function-catalog")
_schemas = load_module("src.model.fitted-model-schemas")
_social = load_module("src.estimator.local-sociability")

PairModel = _schemas.PairModel
Construction = _hf.Construction

logger = logging.getLogger(__name__)

_CFG = _config.section("estimation", "estimator")
MIN_SIGNAL_SCALE = float(_CFG.get("min_signal_scale", 1e-6))
RHO_XATOL = float(_CFG.get("rho_refine_xatol", 1e-4))


@dataclass(frozen=True)
class CandidateScore:
    """Inner optimum for one candidate H."""
    h: object
    signal_scale: float
    objective: float

    @property
    def sigma(self) -> float:
        return float(np.sqrt(max(1.0 / self.signal_scale**2 - 1.0, 0.0)))


def closed_form_scale(g: np.ndarray, h_tilde: np.ndarray) -> tuple[float, float]:
    """(s*, residual sum) for fixed scores."""
    hh = float(np.dot(h_tilde, h_tilde))
    s = MIN_SIGNAL_SCALE if hh <= 0 else float(np.clip(np.dot(g, h_tilde) / hh, MIN_SIGNAL_SCALE, 1.0))
    resid = g - s * h_tilde
    return s, float(np.dot(resid, resid))


def score_candidate(h, g: np.ndarray, x: np.ndarray, y: np.ndarray) -> CandidateScore:
    s, obj = closed_form_scale(g, h.normal_scores(x, y))
    return CandidateScore(h, s, obj)


def score_candidates(g, x, y, candidates) -> list[CandidateScore]:
    """Closed-form score of every candidate over edges with scores ``g`` at sociabilities (x, y)."""
    return [score_candidate(h, g, x, y) for h in candidates]


def _refine_rho(best: CandidateScore, g, x, y) -> CandidateScore:
    grid = np.log(_catalog.normal_rho_grid())
    k = int(np.argmin(np.abs(grid - np.log(best.h.rho))))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
    assoc = best.h.association

    def objective(t: float) -> float:
        return score_candidate(_catalog.normal_rho(np.exp(t), assoc), g, x, y).objective

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": RHO_XATOL})
    refined = score_candidate(_catalog.normal_rho(float(np.exp(res.x)), assoc), g, x, y)
    return refined if refined.objective < best.objective else best


def select_candidate(g, x, y, candidates, refine_rho: bool = True) -> CandidateScore:
    """Argmin of the residual sum over candidates (first wins ties).

    Raises:
        ValueError: empty candidate list.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("at least one candidate H-function is required")
    scores = score_candidates(g, x, y, candidates)
    best = min(scores, key=lambda c: c.objective)
    if refine_rho and best.h.construction is Construction.NORMAL_RHO:
        best = _refine_rho(best, g, x, y)
    return best


def edge_arrays(block, scores, rows, cols) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g, psi_u, psi_v) over the block's unordered present edges."""
    r, c = np.nonzero(block.edge_mask)
    return scores[r, c], rows.psi_hat[r], cols.psi_hat[c]


def fit_h_normal_nsm(block, candidates=None, refine_rho: bool = True) -> PairModel:
    """Fit G-hat, psi-hat, H-hat and sigma-hat to one pair block.

    Missing entries are ignored (first pass of the missing-edge iteration).

    Raises:
        ValueError: empty candidate list or no present edges.
    """
    candidates = _catalog.catalog() if candidates is None else list(candidates)
    if not candidates:
        raise ValueError("at least one candidate H-function is required")
    g_hat, scores = _social.block_scores(block)
    rows, cols = _social.block_sociability(block, scores)
    g, x, y = edge_arrays(block, scores, rows, cols)
    best = select_candidate(g, x, y, candidates, refine_rho)
    logger.debug("Pair (%d, %d): %s sigma=%.4g mse=%.4g", block.i, block.j, best.h.name, best.sigma,
                 best.objective / g.size)
    return PairModel(
        i=block.i, j=block.j,
        g_hat=g_hat,
        h_hat=best.h,
        sigma_hat=best.sigma,
        psi_i_wrt_j=rows.psi_hat.tolist(),
        psi_j_wrt_i=cols.psi_hat.tolist(),
        mse=best.objective / g.size,
        median_weight=g_hat.median(),
        flagged_i=rows.flagged_nodes,
        flagged_j=cols.flagged_nodes,
    )


def _medianized(pair: PairModel, shape) -> np.ndarray:
    out = np.full(shape, pair.median_weight)
    if pair.within:
        np.fill_diagonal(out, 0.0)
    return out


def smooth_block(pair: PairModel) -> np.ndarray:
    """Smooth estimate of every edge in the pair block.

    Within blocks are built from the upper triangle (H-hat(psi_u, psi_v) for
    u < v) and mirrored with a zero diagonal. Spurious or degenerate pairs
    return the median weight everywhere.
    """
    shape = (len(pair.psi_i_wrt_j), len(pair.psi_j_wrt_i))
    if pair.medianized:
        return _medianized(pair, shape)
    est = np.asarray(pair.g_hat.inverse_normal(pair.signal_scale * pair.signal_scores()), dtype=float)
    if pair.within:
        upper = np.triu(est, k=1)
        est = upper + upper.T
    return est


def smooth_estimate(pair: PairModel, u: int, v: int) -> float:
    """Smoothed weight between node ``u`` of community i and node ``v`` of j (local indices).

    Raises:
        ValueError: u == v within a community (no self-loops).
    """
    if pair.within and u == v:
        raise ValueError("no self-loops: u and v must differ within a community")
    if pair.medianized:
        return pair.median_weight
    if pair.within and u > v:
        u, v = v, u
    z = pair.signal_scale * ndtri(pair.h_hat.evaluate(pair.psi_i_wrt_j[u], pair.psi_j_wrt_i[v]))
    return pair.g_hat.inverse_normal(z)


def normal_space_mse(pair: PairModel, block) -> float:
    """Mean over present block edges of (g_uv - s h_uv)^2."""
    if pair.g_hat is None:
        raise ValueError(f"pair ({pair.i}, {pair.j}) has no fitted weight CDF")
    mask = block.edge_mask
    if not mask.any():
        raise ValueError(f"pair ({pair.i}, {pair.j}) has no present edges")
    g = pair.g_hat.normal_scores(block.weights[mask])
    resid = g - pair.signal_scale * pair.signal_scores()[mask]
    return float(np.mean(resid * resid))
