"""Draw networks from an H-Normal nonlinear sociability model.

For u < v in communities (i, j):
    z   = Phi^-1(H(psi_u, psi_v)) / sqrt(1 + s^2) + s * eps / sqrt(1 + s^2)
    W   = G^-1(Phi(z))
with eps ~ N(0, 1) from a substream keyed by the pair, then mirrored.
"""

import logging

import numpy as np
from scipy.special import ndtr

from src.kebab_module_loader import load_module

_streams = load_module("src.numeric.random-streams")
_net = load_module("src.model.network-schemas")
_schemas = load_module("src.model.fitted-model-schemas")
_perturb = load_module("src.generator.edge-perturbations")

Stream = _streams.Stream
WeightedNetwork = _net.WeightedNetwork

logger = logging.getLogger(__name__)

_U_LO = np.nextafter(0.0, 1.0)
_U_HI = np.nextafter(1.0, 0.0)


def draw_psis(assignment, psi_mode, seed: int) -> np.ndarray:
    """Per-node sociabilities in node order."""
    psi = np.empty(assignment.n)
    if psi_mode.kind == "explicit":
        for i, values in enumerate(psi_mode.values, start=1):
            psi[assignment.members(i)] = values
        return psi
    base = seed if psi_mode.seed is None else psi_mode.seed
    for i in range(1, assignment.k + 1):
        rows = assignment.members(i)
        u = _streams.substream(base, Stream.PSI, i).random(rows.size)
        psi[rows] = np.clip(u, _U_LO, _U_HI)
    return psi


def pair_block(recipe, psi_rows: np.ndarray, psi_cols: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Dense n_i x n_j weight block for one recipe."""
    signal = recipe.h.normal_scores(psi_rows[:, None], psi_cols[None, :])
    scale = 1.0 / np.sqrt(1.0 + recipe.sigma**2)
    z = scale * signal
    if recipe.sigma > 0:
        z = z + recipe.sigma * scale * rng.standard_normal(signal.shape)
    return np.asarray(recipe.marginal.quantile(np.clip(ndtr(z), _U_LO, _U_HI)), dtype=float)


def generate(spec, seed: int = 0) -> tuple[WeightedNetwork, np.ndarray]:
    """Draw one network and return it with the realized sociabilities.

    External noise and retention from the recipes are applied after the
    dense draw, each from its own keyed substream.
    """
    a = spec.assignment
    psi = draw_psis(a, spec.psi_mode, seed)
    weights = np.zeros((a.n, a.n))
    for recipe in spec.pairs:
        rows, cols = a.members(recipe.i), a.members(recipe.j)
        rng = _streams.substream(seed, Stream.EPSILON, recipe.i, recipe.j)
        block = pair_block(recipe, psi[rows], psi[cols], rng)
        _net.place_block(weights, rows, cols, block, within=recipe.i == recipe.j)
        logger.debug("Generated pair (%d, %d) with %s, sigma=%g", recipe.i, recipe.j, recipe.h.name, recipe.sigma)
    net = WeightedNetwork(weights=weights)

    noise = {(r.i, r.j): r.external_noise_sd for r in spec.pairs if r.external_noise_sd}
    if noise:
        net = _perturb.add_external_noise(net, noise, seed, assignment=a)
    retention = {(r.i, r.j): r.retention for r in spec.pairs if r.retention is not None}
    if retention:
        net = _perturb.sparsify(net, retention, seed, assignment=a)
    logger.info("Generated %d-node network over %d community pairs", a.n, len(spec.pairs))
    return net, psi
