"""Synthetic replicate networks drawn from a fitted model."""

import logging

import numpy as np
from scipy.special import ndtri

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_streams = load_module("src.numeric.random-streams")
_net = load_module("src.model.network-schemas")

Stream = _streams.Stream
WeightedNetwork = _net.WeightedNetwork

logger = logging.getLogger(__name__)

SIGMA_CUTOFF = float(_config.section("estimation", "bootstrap").get("sigma_cutoff", 0.01))


def effective_sigma(pair) -> float:
    """sigma-hat, or the pair's MSE when sigma-hat is below the cutoff."""
    return pair.sigma_hat if pair.sigma_hat >= SIGMA_CUTOFF else pair.mse


def _structural_edges(pair) -> int:
    n_i, n_j = len(pair.psi_i_wrt_j), len(pair.psi_j_wrt_i)
    return n_i * (n_i - 1) // 2 if pair.within else n_i * n_j


def pair_replicate(pair, rng: np.random.Generator) -> np.ndarray:
    """One replicate block for a pair (within blocks are filled on the upper triangle).

    Raises:
        ValueError: the pair has edges but no fitted weight CDF.
    """
    shape = (len(pair.psi_i_wrt_j), len(pair.psi_j_wrt_i))
    if pair.g_hat is None:
        if _structural_edges(pair):
            raise ValueError(f"pair ({pair.i}, {pair.j}) has no fitted weight CDF")
        return np.zeros(shape)
    if pair.medianized:
        return pair.g_hat.resample(rng, shape)
    sigma = effective_sigma(pair)
    scale = 1.0 / np.sqrt(1.0 + sigma**2)
    noise = rng.standard_normal(shape)
    signal = ndtri(np.asarray(pair.h_hat.evaluate(np.asarray(pair.psi_i_wrt_j)[:, None],
                                                  np.asarray(pair.psi_j_wrt_i)[None, :]), dtype=float))
    return np.asarray(pair.g_hat.inverse_normal(scale * signal + sigma * scale * noise), dtype=float)


def bootstrap_replicate(model, seed: int, replicate: int = 0) -> WeightedNetwork:
    """Draw one replicate network.

    Each edge gets an independent N(0,1) draw mixed with the fitted signal and
    mapped back to the nearest observed weight of its pair. Spurious and
    degenerate pairs resample their observed weights with replacement.
    Randomness is keyed by (seed, replicate, i, j).
    """
    assignment = model.assignment
    weights = np.zeros((assignment.n, assignment.n))
    for pair in model.pairs:
        rng = _streams.substream(seed, Stream.BOOTSTRAP, replicate, pair.i, pair.j)
        block = pair_replicate(pair, rng)
        _net.place_block(weights, assignment.members(pair.i), assignment.members(pair.j), block, within=pair.within)
    return WeightedNetwork(weights=weights)


def bootstrap_replicates(model, seed: int, count: int) -> list[WeightedNetwork]:
    """``count`` replicates; replicate k uses key k, so prefixes agree across counts."""
    if count < 1:
        raise ValueError(f"replicate count must be positive, got {count}")
    out = [bootstrap_replicate(model, seed, k) for k in range(count)]
    logger.info("Drew %d bootstrap replicates (seed %d)", count, seed)
    return out
