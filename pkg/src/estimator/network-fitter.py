"""Whole-network fitting: one pair model per unordered community pair."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_ecdf = load_module("src.numeric.empirical-cdf")
_scores = load_module("src.numeric.score-families")
_catalog = load_module("src.hfunc.h-function-catalog")
_net = load_module("src.model.network-schemas")
_schemas = load_module("src.model.fitted-model-schemas")
_blocks = load_module("src.estimator.pair-blocks")
_lsm = load_module("src.estimator.lsm-estimator")
_nsm = load_module("src.estimator.nsm-estimator")
_screen = load_module("src.estimator.spurious-screen")
_missing = load_module("src.estimator.missing-edge-estimator")

PairModel = _schemas.PairModel
FittedModel = _schemas.FittedModel
WeightedNetwork = _net.WeightedNetwork
ScoreFamily = _scores.ScoreFamily

logger = logging.getLogger(__name__)

NEUTRAL_PSI = 0.5


class FitMode(str, Enum):
    NSM = "nsm"
    NORMAL_LSM = "normal-lsm"
    LSM = "lsm"

    @property
    def linear(self) -> bool:
        return self is not FitMode.NSM


@dataclass(frozen=True)
class FitOptions:
    """Knobs for fit_network; ``workers=None`` falls back to runtime.threads."""
    mode: FitMode = FitMode.NSM
    candidates: tuple | None = None
    screen: bool = False
    seed: int = 0
    replicates: int = _screen.DEFAULT_REPLICATES
    quantile: float = _screen.DEFAULT_QUANTILE
    lsm_families: tuple = field(default_factory=lambda: tuple(ScoreFamily))
    workers: int | None = None


# ── Pair models ────────────────────────────────────────────────


def degenerate_pair(block) -> PairModel:
    """Median model for a pair too small (or too sparse) to carry sociability."""
    values = block.edge_values()
    g_hat = _ecdf.empirical_cdf(values) if values.size else None
    mse = float(np.mean(g_hat.normal_scores(values) ** 2)) if g_hat is not None else 0.0
    n_i, n_j = block.shape
    logger.warning("Pair (%d, %d) is degenerate (%d x %d, %d edges); using its median weight",
                   block.i, block.j, n_i, n_j, values.size)
    return PairModel(
        i=block.i, j=block.j,
        g_hat=g_hat,
        h_hat=_catalog.projection(1),
        sigma_hat=0.0,
        psi_i_wrt_j=[NEUTRAL_PSI] * n_i,
        psi_j_wrt_i=[NEUTRAL_PSI] * n_j,
        mse=mse,
        degenerate=True,
        median_weight=g_hat.median() if g_hat is not None else 0.0,
    )


def lsm_to_pair_model(block, fit) -> PairModel:
    """H-Normal form of an LSM fit.

    alpha Z_u + beta Z_v + sigma eps is NormalRho(beta/alpha) in normal space
    with noise sigma / sqrt(alpha^2 + beta^2); one-sided fits become
    projections.
    """
    a, b = fit.alpha, fit.beta
    if a > 0 and b > 0:
        h_hat = _catalog.normal_rho(b / a)
    else:
        h_hat = _catalog.projection(2 if a == 0 and b > 0 else 1)
    norm = float(np.hypot(a, b))
    g_hat = _ecdf.empirical_cdf(block.edge_values())
    pair = PairModel(
        i=block.i, j=block.j,
        g_hat=g_hat,
        h_hat=h_hat,
        sigma_hat=fit.sigma / norm if norm > 0 else 0.0,
        psi_i_wrt_j=fit.psi_i,
        psi_j_wrt_i=fit.psi_j,
        mse=0.0,
        degenerate=fit.degenerate,
        median_weight=g_hat.median(),
        lsm_fit=fit,
    )
    return pair.model_copy(update={"mse": _nsm.normal_space_mse(pair, block)})


def _too_small(block, mode: FitMode) -> bool:
    n_i, n_j = block.shape
    if block.within and mode.linear:
        return n_i < 3
    return min(n_i, n_j) < 2 or block.edge_values().size == 0


def fit_pair(net: WeightedNetwork, assignment, i: int, j: int, options: FitOptions | None = None) -> PairModel:
    """Fit one community pair under ``options.mode``.

    NSM blocks with missing entries go through the missing-edge iteration;
    within-community LSM blocks get an imputed diagonal. With
    ``options.screen`` the pair is compared against fictional noise fits and
    marked spurious when it does no better.
    """
    options = options or FitOptions()
    i, j = min(i, j), max(i, j)
    block = _blocks.extract_block(net, assignment, i, j)
    if _too_small(block, options.mode):
        return degenerate_pair(block)

    screen_block = block
    if options.mode is FitMode.NSM:
        if block.has_missing:
            result = _missing.fit_missing(block, options.candidates)
            pair = result.model
            screen_block = block.with_weights(result.imputed, dense=True)
        else:
            pair = _nsm.fit_h_normal_nsm(block, options.candidates)
    elif options.mode is FitMode.NORMAL_LSM:
        pair = lsm_to_pair_model(block, _lsm.fit_normal_lsm(block))
    else:
        pair = lsm_to_pair_model(block, _lsm.fit_lsm_general(block, options.lsm_families))

    if options.screen and not pair.degenerate:
        result = _screen.screen_pair(pair, screen_block, options.replicates, options.quantile, options.seed)
        pair = pair.model_copy(update={"spurious": result.spurious})
    logger.info("Pair (%d, %d): %s sigma=%.4g mse=%.4g%s", i, j, pair.h_hat.name, pair.sigma_hat, pair.mse,
                " [spurious]" if pair.spurious else "")
    return pair


def fit_network(net: WeightedNetwork, assignment, options: FitOptions | None = None) -> FittedModel:
    """Fit every unordered community pair and assemble the FittedModel.

    Pair fits are independent and run on a thread pool sized by
    ``options.workers`` or runtime.threads.

    Raises:
        ValueError: assignment length differs from the network size.
    """
    options = options or FitOptions()
    if assignment.n != net.n:
        raise ValueError(f"assignment covers {assignment.n} nodes but the network has {net.n}")
    pairs = assignment.pairs()
    workers = options.workers or _config.worker_count()
    logger.info("Fitting %d community pairs in %s mode", len(pairs), options.mode.value)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        models = list(pool.map(lambda ij: fit_pair(net, assignment, ij[0], ij[1], options), pairs))
    return FittedModel(assignment=assignment, pairs=models)


# ── Reconstruction and summaries ───────────────────────────────


def estimated_network(model: FittedModel) -> WeightedNetwork:
    """Smooth estimate of every edge; spurious or degenerate pairs hold their median weight."""
    blocks = {(p.i, p.j): _nsm.smooth_block(p) for p in model.pairs}
    return WeightedNetwork(weights=_blocks.scatter_blocks(model.assignment.n, model.assignment, blocks))


def summarize_fit(model: FittedModel) -> pd.DataFrame:
    """One row per community pair."""
    rows = [
        {
            "i": p.i,
            "j": p.j,
            "family": p.h_hat.family,
            "association": p.h_hat.association.value,
            "h_hat": p.h_hat.name,
            "sigma_hat": p.sigma_hat,
            "mse": p.mse,
            "spurious": p.spurious,
            "degenerate": p.degenerate,
            "median_weight": p.median_weight,
            "iterations": p.iterations,
        }
        for p in model.pairs
    ]
    return pd.DataFrame(rows)
