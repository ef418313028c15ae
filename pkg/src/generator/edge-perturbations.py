"""Bernoulli edge retention (missing edges) and additive external noise."""

import logging
from collections.abc import Mapping

import numpy as np

from src.kebab_module_loader import load_module

_streams = load_module("src.numeric.random-streams")
_net = load_module("src.model.network-schemas")

Stream = _streams.Stream
WeightedNetwork = _net.WeightedNetwork

logger = logging.getLogger(__name__)


def _per_pair(value, assignment) -> dict[tuple[int, int], float]:
    """Pair -> value; a mapping leaves unlisted pairs untouched."""
    if isinstance(value, Mapping):
        out = {}
        for (i, j), v in value.items():
            out[(min(i, j), max(i, j))] = float(v)
        return out
    return {p: float(value) for p in assignment.pairs()}


def _pair_layout(net: WeightedNetwork, assignment):
    if assignment is None:
        assignment = _net.CommunityAssignment.single(net.n)
    if assignment.n != net.n:
        raise ValueError(f"assignment covers {assignment.n} nodes, network has {net.n}")
    return assignment


def sparsify(net: WeightedNetwork, retention, seed: int, assignment=None) -> WeightedNetwork:
    """Keep each off-diagonal unordered pair with its community pair's probability.

    Args:
        net: Input network; existing missing entries stay missing.
        retention: One probability, or a mapping (i, j) -> probability.
        seed: Base seed; draws are keyed by community pair.
        assignment: Communities for per-pair probabilities (default: one community).
    """
    a = _pair_layout(net, assignment)
    probs = _per_pair(retention, a)
    dropped = np.zeros((net.n, net.n), dtype=bool)
    for (i, j), p in probs.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"retention for pair ({i}, {j}) must lie in [0, 1], got {p}")
        rows, cols = a.members(i), a.members(j)
        u = _streams.substream(seed, Stream.RETENTION, i, j).random((rows.size, cols.size))
        _net.place_block(dropped, rows, cols, u >= p, within=i == j)
    np.fill_diagonal(dropped, False)
    missing = net.missing_mask() | dropped
    weights = np.where(missing, 0.0, net.weights)
    logger.info("Sparsified network: %.1f%% of edges missing", 100 * missing.sum() / max(net.n * (net.n - 1), 1))
    return WeightedNetwork(weights=weights, missing=missing)


def add_external_noise(net: WeightedNetwork, sd, seed: int, assignment=None) -> WeightedNetwork:
    """Add symmetric N(0, sd^2) noise to every present off-diagonal edge."""
    a = _pair_layout(net, assignment)
    sds = _per_pair(sd, a)
    noise = np.zeros((net.n, net.n))
    for (i, j), s in sds.items():
        if s < 0:
            raise ValueError(f"external noise sd for pair ({i}, {j}) must be non-negative, got {s}")
        if s == 0:
            continue
        rows, cols = a.members(i), a.members(j)
        z = _streams.substream(seed, Stream.EXTERNAL_NOISE, i, j).standard_normal((rows.size, cols.size))
        _net.place_block(noise, rows, cols, s * z, within=i == j)
    weights = np.where(net.present_mask(), net.weights + noise, net.weights)
    return WeightedNetwork(weights=weights, missing=net.missing)
