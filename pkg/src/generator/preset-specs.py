"""Ready-made simulation setups used by tests and the CLI ``--preset`` flag."""

import numpy as np

from src.kebab_module_loader import load_module

_streams = load_module("src.numeric.random-streams")
_dist = load_module("src.numeric.continuous-distributions")
_catalog = load_module("src.hfunc.h-function-catalog")
_hf = load_module("src.hfunc.h-functions")
_net = load_module("src.model.network-schemas")
_schemas = load_module("src.model.fitted-model-schemas")

Stream = _streams.Stream
Association = _hf.Association
Distribution = _dist.Distribution
CommunityAssignment = _net.CommunityAssignment
PairRecipe = _schemas.PairRecipe
LsmPairRecipe = _schemas.LsmPairRecipe


def psi_grid(size: int, lo: float = 0.05, hi: float = 0.95) -> list[float]:
    """Evenly spaced sociabilities; 37 nodes give the .05 .. .95 step .025 grid."""
    return np.linspace(lo, hi, size).tolist()


def blocks(sizes) -> CommunityAssignment:
    """Contiguous communities of the given sizes."""
    return CommunityAssignment(labels=[i + 1 for i, s in enumerate(sizes) for _ in range(s)])


def planted_sociability_spec(
    sizes=(37, 37, 37, 37),
    sigma_within: float = 0.0,
    sigma_between: float = 0.0,
    within_max: float = 150.0,
    between_max: float = 100.0,
    external_noise_sd: float | None = None,
    retention: float | None = None,
):
    """Negated half-gamma H with positive association within and negative between.

    Marginals are U(0, within_max) within communities and U(0, between_max)
    between them; every community uses the same evenly spaced psi grid.
    """
    assignment = blocks(sizes)
    recipes = []
    for i, j in assignment.pairs():
        within = i == j
        recipes.append(PairRecipe(
            i=i, j=j,
            h=_catalog.neg_half_gamma(Association.POSITIVE if within else Association.NEGATIVE),
            sigma=sigma_within if within else sigma_between,
            marginal=Distribution.uniform(0.0, within_max if within else between_max),
            external_noise_sd=external_noise_sd,
            retention=retention,
        ))
    psi_mode = _schemas.PsiMode(kind="explicit", values=[psi_grid(s) for s in sizes])
    return _schemas.GeneratorSpec(assignment=assignment, pairs=recipes, psi_mode=psi_mode)


def simpson_exponential_spec(sizes=(37, 37), sigma: float = 0.0):
    """Exponential-sum H: positive association within, Simpson association between."""
    assignment = blocks(sizes)
    recipes = [
        PairRecipe(i=i, j=j, sigma=sigma,
                   h=_catalog.exp_gamma(Association.POSITIVE if i == j else Association.SIMPSON_X),
                   marginal=Distribution.uniform(0.0, 150.0 if i == j else 100.0))
        for i, j in assignment.pairs()
    ]
    psi_mode = _schemas.PsiMode(kind="explicit", values=[psi_grid(s) for s in sizes])
    return _schemas.GeneratorSpec(assignment=assignment, pairs=recipes, psi_mode=psi_mode)


def mixed_association_lsm_recipes(sigma: float = 0.0) -> list:
    """Two communities: 5 + 3Z_u + 3Z_v within, 8 - 3Z_u + 1.5Z_v between."""
    return [
        LsmPairRecipe(i=1, j=1, gamma=5.0, alpha=3.0, beta=3.0, sigma=sigma),
        LsmPairRecipe(i=2, j=2, gamma=5.0, alpha=3.0, beta=3.0, sigma=sigma),
        LsmPairRecipe(i=1, j=2, gamma=8.0, alpha=-3.0, beta=1.5, sigma=sigma),
    ]


def disassortative_network(sizes=(37, 37, 37, 37), seed: int = 0, shuffle: bool = False):
    """Disassortative network with structureless within-community edges.

    Within-community weights are i.i.d. U(0, 20). Between communities each
    node draws a Gamma(2, scale 5) rate and W_uv ~ NegBinomial(r_u + r_v, 0.2),
    so between edges are larger and carry node-level structure.

    Returns:
        (WeightedNetwork, CommunityAssignment); with ``shuffle`` the node
        order is permuted and the assignment follows it.
    """
    assignment = blocks(sizes)
    n = assignment.n
    rates = _streams.substream(seed, Stream.PSI, 0).gamma(2.0, 5.0, size=n)
    weights = np.zeros((n, n))
    for i, j in assignment.pairs():
        rows, cols = assignment.members(i), assignment.members(j)
        rng = _streams.substream(seed, Stream.EPSILON, i, j)
        if i == j:
            block = rng.uniform(0.0, 20.0, size=(rows.size, cols.size))
        else:
            shape = rates[rows][:, None] + rates[cols][None, :]
            block = rng.negative_binomial(shape, 0.2).astype(float)
        _net.place_block(weights, rows, cols, block, within=i == j)
    if shuffle:
        order = _streams.substream(seed, Stream.SAMPLE, 0).permutation(n)
        weights = weights[np.ix_(order, order)]
        assignment = CommunityAssignment.from_labels(assignment.as_array()[order])
    return _net.WeightedNetwork(weights=weights), assignment
