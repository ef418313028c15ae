"""Iterative imputation of missing edges inside one pair block."""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.kebab_module_loader import load_module

_config = load_module("src.config-loader")
_nsm = load_module("src.estimator.nsm-estimator")

logger = logging.getLogger(__name__)

_CFG = _config.section("estimation", "missing")
EPSILON_PER_ENTRY = float(_CFG.get("epsilon_per_entry", 1e-4))
DEFAULT_MAX_ITERS = int(_CFG.get("max_iters", 100))


@dataclass(frozen=True, eq=False)
class MissingEdgeFit:
    """Final pair model, the block with missing entries filled, and the per-pass deltas."""
    model: object
    imputed: np.ndarray
    deltas: list[float] = field(default_factory=list)
    converged: bool = True

    @property
    def iterations(self) -> int:
        return len(self.deltas)


def fit_missing(block, candidates=None, epsilon: float | None = None,
                max_iters: int | None = None) -> MissingEdgeFit:
    """Fit a pair block with missing entries.

    Pass 0 fits ignoring the missing entries. Every later pass computes the
    smooth estimate E_k, measures delta = ||E_k - E_{k-1}||^2 over all
    structural edges (E_0 = 0), stops when delta <= epsilon, and otherwise
    refits on the observed weights with the missing ones taken from E_k.

    Args:
        block: PairBlock; its ``present`` mask marks observed entries.
        candidates: H-function candidates (full catalog by default).
        epsilon: Stopping tolerance; defaults to 1e-4 per missing entry.
        max_iters: Cap on smoothing passes.

    Raises:
        ValueError: the block has no present edges.
    """
    if block.edge_values().size == 0:
        raise ValueError(f"pair ({block.i}, {block.j}) has no present edges")
    missing = block.missing
    if block.within:
        missing = missing | missing.T
    eps = EPSILON_PER_ENTRY * int(block.missing.sum()) if epsilon is None else float(epsilon)
    max_iters = DEFAULT_MAX_ITERS if max_iters is None else int(max_iters)
    structural = block.full_mask

    model = _nsm.fit_h_normal_nsm(block, candidates)
    fits = 1
    previous = np.zeros(block.shape)
    imputed = np.where(missing, 0.0, block.weights)
    deltas: list[float] = []
    converged = False
    for k in range(1, max_iters + 1):
        estimate = _nsm.smooth_block(model)
        diff = (estimate - previous)[structural]
        delta = float(np.dot(diff, diff))
        deltas.append(delta)
        previous = estimate
        imputed = np.where(missing, estimate, block.weights)
        logger.debug("Pair (%d, %d) pass %d: delta %.4g", block.i, block.j, k, delta)
        if delta <= eps:
            converged = True
            break
        model = _nsm.fit_h_normal_nsm(block.with_weights(imputed, dense=True), candidates)
        fits += 1
    if converged:
        logger.info("Pair (%d, %d): missing-edge iteration converged after %d passes", block.i, block.j, len(deltas))
    else:
        logger.warning("Pair (%d, %d): missing-edge iteration hit %d passes (last delta %.4g)",
                       block.i, block.j, max_iters, deltas[-1] if deltas else float("nan"))
    if block.within:
        np.fill_diagonal(imputed, 0.0)
    model = model.model_copy(update={"iterations": fits})
    return MissingEdgeFit(model=model, imputed=imputed, deltas=deltas, converged=converged)
