"""The clustering measure L.

For nodes u in community i and a community j, C_j(u) is the correlation
between u's weights into j and the weights those nodes receive from the rest
of i. L sums, over ordered community pairs, mean(C) (1 - sqrt(SD(C))) times
the size factor (n_i - 2)(n_j - 2), doubled within a community. Communities
of one or two nodes contribute nothing.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.kebab_module_loader import load_module

_stats = load_module("src.numeric.statistics-utils")

logger = logging.getLogger(__name__)

MIN_CONTRIBUTING_SIZE = 3


@dataclass(frozen=True)
class PairTerm:
    """Contribution of the ordered community pair (i, j)."""
    i: int
    j: int
    mean_c: float
    sd_c: float
    size_factor: float
    contribution: float


@dataclass(frozen=True)
class ClusterScore:
    value: float
    terms: tuple[PairTerm, ...] = ()


def observed_weights(net) -> tuple[np.ndarray, np.ndarray]:
    """(weights with missing entries zeroed, present mask)."""
    present = net.present_mask()
    return np.where(present, net.weights, 0.0), present


def correlations(w: np.ndarray, present: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """C(u) for every u in ``rows`` (community i) against ``cols`` (community j)."""
    block = w[np.ix_(rows, cols)]
    d = block.sum(axis=0)
    return _stats.masked_row_pearson(block, d, present[np.ix_(rows, cols)])


def score_labels(w: np.ndarray, present: np.ndarray, labels) -> ClusterScore:
    """L for a label vector (any hashable ids) over prepared weights."""
    labels = np.asarray(labels)
    ids, inverse = np.unique(labels, return_inverse=True)
    members = [np.flatnonzero(inverse == k) for k in range(ids.size)]
    big = [k for k in range(ids.size) if members[k].size >= MIN_CONTRIBUTING_SIZE]
    terms = []
    total = 0.0
    for a in big:
        for b in big:
            c = correlations(w, present, members[a], members[b])
            mean_c = float(c.mean())
            sd_c = float(_stats.sample_sd(c))
            size = float((members[a].size - 2) * (members[b].size - 2))
            contribution = mean_c * (1.0 - np.sqrt(sd_c)) * size * (2.0 if a == b else 1.0)
            terms.append(PairTerm(int(a) + 1, int(b) + 1, mean_c, sd_c, size, contribution))
            total += contribution
    return ClusterScore(value=total, terms=tuple(terms))


def measure_l(net, assignment) -> ClusterScore:
    """L of ``assignment`` on ``net``; term indices follow the sorted community ids."""
    if assignment.n != net.n:
        raise ValueError(f"assignment covers {assignment.n} nodes but the network has {net.n}")
    w, present = observed_weights(net)
    return score_labels(w, present, assignment.as_array())


def node_community_correlation(net, assignment, u: int, j: int) -> float:
    """C_j(u): Pearson correlation of W_uv with d_i(v) over v in j, v != u.

    d_i(v) sums the weights v receives from u's community i (excluding v).
    Returns 0 when fewer than two such v exist or either side is constant.
    """
    w, present = observed_weights(net)
    labels = assignment.as_array()
    cols = assignment.members(j)
    cols = cols[cols != u]
    cols = cols[present[u, cols]]
    if cols.size < 2:
        return 0.0
    rows = np.flatnonzero(labels == labels[u])
    d = w[np.ix_(rows, cols)].sum(axis=0)
    return _stats.pearson_or_zero(w[u, cols], d)
