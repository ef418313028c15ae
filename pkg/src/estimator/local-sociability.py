"""Local sociability statistics D and their rank levels psi-hat."""

import logging
from dataclasses import dataclass

import numpy as np

from src.kebab_module_loader import load_module

_ecdf = load_module("src.numeric.empirical-cdf")
_blocks = load_module("src.estimator.pair-blocks")

logger = logging.getLogger(__name__)

NEUTRAL_PSI = 0.5


@dataclass(frozen=True, eq=False)
class SociabilityStats:
    """D_j(u) per node and its tie-adjusted rank level; ``flagged`` nodes had no usable edges."""
    d: np.ndarray
    psi_hat: np.ndarray
    flagged: np.ndarray

    @property
    def flagged_nodes(self) -> list[int]:
        return np.flatnonzero(self.flagged).tolist()


def block_scores(block, g_hat=None) -> tuple:
    """G-hat of the block (built from its edges when not given) and the normal-score matrix.

    Entries that are not present hold 0 in the score matrix.
    """
    if g_hat is None:
        values = block.edge_values()
        if values.size == 0:
            raise ValueError(f"pair ({block.i}, {block.j}) has no present edges")
        g_hat = _ecdf.empirical_cdf(values)
    scores = np.where(block.present, g_hat.normal_scores(block.weights), 0.0)
    return g_hat, scores


def _stats(d: np.ndarray, usable: np.ndarray) -> SociabilityStats:
    psi = np.full(d.shape, NEUTRAL_PSI)
    if usable.any():
        psi[usable] = _ecdf.rank_levels(d[usable])
    return SociabilityStats(d=d, psi_hat=psi, flagged=~usable)


def block_sociability(block, scores: np.ndarray) -> tuple[SociabilityStats, SociabilityStats]:
    """Row and column statistics of a pair block.

    Nodes without present edges keep psi-hat 0.5 and are flagged; the
    remaining nodes are ranked among themselves.
    """
    present = block.present
    rows = _stats((scores * present).sum(axis=1), present.any(axis=1))
    cols = rows if block.within else _stats((scores * present).sum(axis=0), present.any(axis=0))
    for label, st in (("row", rows), ("column", cols))[: 1 if block.within else 2]:
        if st.flagged.any():
            logger.warning("Pair (%d, %d): %d %s nodes have no present edges; psi-hat set to %.1f",
                           block.i, block.j, int(st.flagged.sum()), label, NEUTRAL_PSI)
    return rows, cols


def local_sociability(net, assignment, i: int, j: int) -> tuple[SociabilityStats, SociabilityStats]:
    """Statistics for community i with respect to j and for j with respect to i.

    D_j(u) sums Phi^-1(G-hat(W_uv)) over present v in j (v != u within a
    community); psi-hat is the tie-adjusted rank level of D among the nodes
    of i.
    """
    block = _blocks.extract_block(net, assignment, i, j)
    _, scores = block_scores(block)
    return block_sociability(block, scores)
