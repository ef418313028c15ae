"""Spurious-structure screen: compare a pair's fit against fits to pure-noise blocks."""

import logging
from dataclasses import dataclass

import numpy as np

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_streams = load_module("src.numeric.random-streams")
_catalog = load_module("src.hfunc.h-function-catalog")
_blocks = load_module("src.estimator.pair-blocks")
_nsm = load_module("src.estimator.nsm-estimator")

Stream = _streams.Stream

logger = logging.getLogger(__name__)

_CFG = _config.section("estimation", "screen")
DEFAULT_REPLICATES = int(_CFG.get("replicates", 99))
DEFAULT_QUANTILE = float(_CFG.get("quantile", 0.05))
MIN_REPLICATES = 19


@dataclass(frozen=True, eq=False)
class ScreenResult:
    spurious: bool
    observed_mse: float
    threshold: float
    fictional_mse: np.ndarray


def _noise_block(shape: tuple[int, int], within: bool, rng: np.random.Generator) -> np.ndarray:
    w = rng.standard_normal(shape)
    if within:
        upper = np.triu(w, k=1)
        w = upper + upper.T
    return w


def fictional_mses(pair, shape: tuple[int, int], replicates: int, seed: int) -> np.ndarray:
    """Normal-space MSE of same-family fits to ``replicates`` i.i.d. N(0,1) blocks of ``shape``."""
    candidates = _catalog.family_candidates(pair.h_hat)
    within = pair.within
    out = np.empty(replicates)
    for r in range(replicates):
        rng = _streams.substream(seed, Stream.SPURIOUS, pair.i, pair.j, r)
        block = _blocks.dense_block(_noise_block(shape, within, rng), within)
        out[r] = _nsm.fit_h_normal_nsm(block, candidates).mse
    return out


def screen_threshold(fictional: np.ndarray, quantile: float) -> float:
    """k-th smallest fictional MSE with k = max(1, round(quantile * (R + 1)))."""
    k = max(1, int(round(quantile * (fictional.size + 1))))
    return float(np.sort(fictional)[min(k, fictional.size) - 1])


def screen_pair(pair, block, replicates: int = DEFAULT_REPLICATES, quantile: float = DEFAULT_QUANTILE,
                seed: int = 0) -> ScreenResult:
    """Full screen result for a fitted pair.

    The pair is spurious when its MSE exceeds the ``quantile`` order
    statistic of the fictional MSEs; with 99 replicates and 0.05 that is the
    5th smallest.

    Raises:
        ValueError: fewer than 19 replicates or quantile outside (0, 1).
    """
    if replicates < MIN_REPLICATES:
        raise ValueError(f"spurious screen needs at least {MIN_REPLICATES} replicates, got {replicates}")
    if not 0.0 < quantile < 1.0:
        raise ValueError(f"quantile must lie in (0, 1), got {quantile}")
    fictional = fictional_mses(pair, block.shape, replicates, seed)
    threshold = screen_threshold(fictional, quantile)
    observed = _nsm.normal_space_mse(pair, block)
    spurious = observed > threshold
    logger.info("Pair (%d, %d): mse %.4g vs threshold %.4g -> %s", pair.i, pair.j, observed, threshold,
                "spurious" if spurious else "structured")
    return ScreenResult(spurious=bool(spurious), observed_mse=observed, threshold=threshold, fictional_mse=fictional)


def spurious_screen(pair, block, replicates: int = DEFAULT_REPLICATES, quantile: float = DEFAULT_QUANTILE,
                    seed: int = 0) -> bool:
    return screen_pair(pair, block, replicates, quantile, seed).spurious
