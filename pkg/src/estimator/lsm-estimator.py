"""Linear sociability model fits through rank-one factorization of exp(W).

Under f(W_uv) = gamma + alpha h1(psi_u) + beta h2(psi_v), exp(f(W)) is the
rank-one matrix a b' with log a = alpha h1 + const, so the log factors carry
the scores and their standard deviations estimate alpha and beta.
"""

import logging

import numpy as np
from scipy.special import ndtr

from src.kebab_module_loader import load_module

_stats = load_module("src.numeric.statistics-utils")
_nmf = load_module("src.numeric.rank-one-factorization")
_scores = load_module("src.numeric.score-families")
_schemas = load_module("src.model.fitted-model-schemas")
_impute = load_module("src.estimator.diagonal-imputation")

LsmFit = _schemas.LsmFit
ScoreFamily = _scores.ScoreFamily

logger = logging.getLogger(__name__)

_PSI_CLIP = 1e-12
_DEGENERATE_SD = 1e-10
NEUTRAL_PSI = 0.5


def _log_factors(block):
    """Centered block, block mean, factorization and log factors.

    Within blocks without missing entries get an imputed diagonal; otherwise
    the diagonal and missing entries are masked out of the factorization.
    """
    edges = block.edge_values()
    if edges.size == 0:
        raise ValueError(f"pair ({block.i}, {block.j}) has no present edges")
    mu = float(edges.mean())
    x = np.where(block.present, block.weights - mu, 0.0)
    mask = None
    if block.within and not block.has_missing:
        x = _impute.impute_diagonal(x)
    elif not block.present.all():
        mask = ~block.present
    factors = _nmf.rank_one_factorize(np.exp(x), mask)
    if not factors.converged:
        logger.warning("Pair (%d, %d): rank-one factorization did not converge (residual %.3e)",
                       block.i, block.j, factors.residual)
    la, lb = np.log(factors.a), np.log(factors.b)
    if block.within:
        lb = la
    return x, mu, factors, la, lb


def _standardize(log_factor: np.ndarray) -> tuple[float, np.ndarray, bool]:
    sd = float(_stats.sample_sd(log_factor)) if log_factor.size > 1 else 0.0
    if not np.isfinite(sd) or sd <= _DEGENERATE_SD:
        return 0.0, np.zeros_like(log_factor), True
    return sd, (log_factor - log_factor.mean()) / sd, False


def _residual(block, x, alpha, beta, z_i, z_j) -> np.ndarray:
    fitted = alpha * z_i[:, None] + beta * z_j[None, :]
    return (x - fitted)[block.edge_mask]


def _finish(block, mu, x, alpha, beta, z_i, z_j, psi_i, psi_j, degenerate, converged, h1, h2) -> LsmFit:
    resid = _residual(block, x, alpha, beta, z_i, z_j)
    sigma = float(_stats.sample_sd(resid)) if resid.size > 1 else 0.0
    if degenerate:
        logger.warning("Pair (%d, %d): log factors have no spread; sociability-free block", block.i, block.j)
    return LsmFit(
        alpha=alpha, beta=beta, gamma=mu + float(resid.mean()),
        z_i=z_i.tolist(), z_j=z_j.tolist(),
        psi_i=psi_i.tolist(), psi_j=psi_j.tolist(),
        sigma=sigma, h1=h1, h2=h2,
        degenerate=degenerate, converged=converged,
    )


def fit_normal_lsm(block) -> LsmFit:
    """Normal-score LSM fit of one pair block.

    alpha-hat = SD(log a), Z-hat = standardized log a, psi-hat = Phi(Z-hat);
    sigma-hat is the SD of the residual over present edges. Within blocks
    share one factor, so beta-hat equals alpha-hat and z_j equals z_i.

    Raises:
        ValueError: no present edges, or a within block with fewer than 3 nodes.
    """
    x, mu, factors, la, lb = _log_factors(block)
    alpha, z_i, deg_i = _standardize(la)
    beta, z_j, deg_j = _standardize(lb)

    def to_psi(z, degenerate):
        if degenerate:
            return np.full(z.shape, NEUTRAL_PSI)
        return np.clip(ndtr(z), _PSI_CLIP, 1.0 - _PSI_CLIP)

    return _finish(block, mu, x, alpha, beta, z_i, z_j, to_psi(z_i, deg_i), to_psi(z_j, deg_j),
                   deg_i or deg_j, factors.converged, ScoreFamily.NORMAL, ScoreFamily.NORMAL)


def _side(log_factor: np.ndarray, families):
    """(alpha, z, psi, family, degenerate) for one side from a maximum-likelihood family fit."""
    n = log_factor.size
    spread = _stats.sample_sd(log_factor) if n > 1 else 0.0
    if not np.isfinite(spread) or spread <= _DEGENERATE_SD:
        return 0.0, np.zeros(n), np.full(n, NEUTRAL_PSI), ScoreFamily(families[0]), True
    fit = _scores.select_family(families, log_factor)
    frozen = fit.family.scipy_family(loc=fit.loc, scale=fit.scale)
    alpha = float(frozen.std())
    z = (log_factor - float(frozen.mean())) / alpha
    edge = 0.5 / (n + 1)
    psi = np.clip(fit.cdf(log_factor), edge, 1.0 - edge)
    logger.debug("Selected %s scores (loglik %.4g)", fit.family.value, fit.log_likelihood)
    return alpha, z, psi, fit.family, False


def fit_lsm_general(block, families=tuple(ScoreFamily)) -> LsmFit:
    """LSM fit with h1, h2 chosen by maximum likelihood among ``families``.

    Each side's log-factor scores are fitted by every family (location and
    scale, assuming uniform sociabilities) and the best log-likelihood wins;
    psi-hat is the fitted CDF at the scores, kept inside
    [0.5/(n+1), 1 - 0.5/(n+1)].

    Raises:
        ValueError: empty family list or no present edges.
    """
    families = [ScoreFamily(f) for f in families]
    if not families:
        raise ValueError("at least one candidate score family is required")
    x, mu, factors, la, lb = _log_factors(block)
    alpha, z_i, psi_i, h1, deg_i = _side(la, families)
    if block.within:
        beta, z_j, psi_j, h2, deg_j = alpha, z_i, psi_i, h1, deg_i
    else:
        beta, z_j, psi_j, h2, deg_j = _side(lb, families)
    return _finish(block, mu, x, alpha, beta, z_i, z_j, psi_i, psi_j,
                   deg_i or deg_j, factors.converged, h1, h2)
