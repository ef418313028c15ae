"""Linear sociability model generator: f(W) = gamma + alpha h1(psi_u) + beta h2(psi_v) + sigma eps."""

import logging

import numpy as np

from src.kebab_module_loader import load_module

_streams = load_module("src.numeric.random-streams")
_net = load_module("src.model.network-schemas")
_nsm = load_module("src.generator.nsm-generator")
_schemas = load_module("src.model.fitted-model-schemas")

Stream = _streams.Stream
WeightedNetwork = _net.WeightedNetwork

logger = logging.getLogger(__name__)


def _check_recipes(assignment, recipes) -> dict:
    by_pair = {}
    for r in recipes:
        key = (min(r.i, r.j), max(r.i, r.j))
        if key in by_pair:
            raise ValueError(f"duplicate LSM recipe for pair {key}")
        if r.i == r.j and (r.alpha != r.beta or r.h1 != r.h2):
            raise ValueError(f"within-community pair ({r.i}, {r.j}) needs alpha == beta and a shared h "
                             f"(got alpha={r.alpha}, beta={r.beta}, h1={r.h1.value}, h2={r.h2.value})")
        by_pair[key] = r
    missing = set(assignment.pairs()) - set(by_pair)
    if missing:
        raise ValueError(f"no LSM recipe for pairs {sorted(missing)}")
    return by_pair


def generate_lsm(assignment, recipes, seed: int = 0, psis: np.ndarray | None = None) -> WeightedNetwork:
    """Draw a network from the linear sociability model.

    Args:
        assignment: Community labels.
        recipes: One LsmPairRecipe per unordered community pair (i <= j).
        seed: Base seed for psi (when not given) and noise substreams.
        psis: Optional per-node sociabilities in (0, 1).

    Raises:
        ValueError: missing recipe, or a within pair with alpha != beta.
    """
    by_pair = _check_recipes(assignment, recipes)
    psi = _nsm.draw_psis(assignment, _schemas.PsiMode(), seed) if psis is None else np.asarray(psis, dtype=float)
    weights = np.zeros((assignment.n, assignment.n))
    for (i, j), r in by_pair.items():
        rows, cols = assignment.members(i), assignment.members(j)
        h1 = r.h1.transform(psi[rows])[:, None]
        h2 = r.h2.transform(psi[cols])[None, :]
        f = r.gamma + r.alpha * h1 + r.beta * h2
        if r.sigma > 0:
            f = f + r.sigma * _streams.substream(seed, Stream.EPSILON, i, j).standard_normal(f.shape)
        block = np.exp(f) if r.link == "log" else f
        _net.place_block(weights, rows, cols, np.broadcast_to(block, (rows.size, cols.size)), within=i == j)
    logger.info("Generated %d-node LSM network over %d community pairs", assignment.n, len(by_pair))
    return WeightedNetwork(weights=weights)
