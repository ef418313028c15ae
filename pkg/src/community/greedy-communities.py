"""Greedy agglomerative community detection driven by the measure L."""

import logging
from collections import deque

import numpy as np

from src.kebab_module_loader import load_module

_stats = load_module("src.numeric.statistics-utils")
_net = load_module("src.model.network-schemas")
_measure = load_module("src.community.measure-l")

CommunityAssignment = _net.CommunityAssignment

logger = logging.getLogger(__name__)


class _GreedyState:
    """Labels, aggregate profiles and the cached L of the current clustering.

    ``aggregate[:, k]`` is the summed weight profile of community ``active[k]``.
    """

    def __init__(self, net):
        self.w, self.present = _measure.observed_weights(net)
        self.labels = np.arange(net.n)
        self.active = list(range(net.n))
        self.aggregate = self.w.copy()
        self.score = _measure.score_labels(self.w, self.present, self.labels).value
        self.merges = 0

    def column(self, label: int) -> int:
        return self.active.index(label)

    def degree_order(self) -> list[int]:
        degrees = self.aggregate.sum(axis=0)
        order = np.argsort(-degrees, kind="stable")
        return [self.active[k] for k in order]

    def best_partner(self, label: int) -> int:
        corr = _stats.column_correlations(self.aggregate, self.column(label))
        corr[self.column(label)] = -np.inf
        return self.active[int(np.argmax(corr))]

    def try_merge(self, a: int, b: int) -> bool:
        """Merge ``b`` into ``a`` when L does not decrease."""
        merged = np.where(self.labels == b, a, self.labels)
        score = _measure.score_labels(self.w, self.present, merged).value
        if score < self.score:
            return False
        ca, cb = self.column(a), self.column(b)
        self.aggregate[:, ca] += self.aggregate[:, cb]
        self.aggregate = np.delete(self.aggregate, cb, axis=1)
        del self.active[cb]
        self.labels = merged
        self.score = score
        self.merges += 1
        logger.debug("Merged community %d into %d (L=%.6g, %d left)", b, a, score, len(self.active))
        return True


def _round(state: _GreedyState) -> bool:
    queue = deque(state.degree_order())
    merged_any = False
    while queue and len(state.active) > 1:
        a = queue.popleft()
        b = state.best_partner(a)
        if state.try_merge(a, b):
            merged_any = True
            queue = deque(a if x == b else x for x in queue)
    return merged_any


def _sweep(state: _GreedyState) -> bool:
    candidates = []
    for x in range(len(state.active)):
        corr = _stats.column_correlations(state.aggregate, x)
        for y in range(x + 1, len(state.active)):
            candidates.append((corr[y], state.active[x], state.active[y]))
    candidates.sort(key=lambda t: -t[0])
    return any(state.try_merge(a, b) for _, a, b in candidates)


def greedy_communities(net) -> CommunityAssignment:
    """Agglomerate singletons into communities that keep L from decreasing.

    Each round visits communities by decreasing aggregate degree and tries to
    merge each with its most correlated partner; a merged partner's queue
    slot is taken over by the merged community. A round without merges is
    followed by a sweep over all pairs in decreasing correlation, stopping at
    the first accepted merge. Ends after a mergeless round and sweep, or at
    one community.

    Raises:
        ValueError: fewer than 2 nodes.
    """
    if net.n < 2:
        raise ValueError(f"greedy detection needs at least 2 nodes, got {net.n}")
    state = _GreedyState(net)
    rounds = 0
    while len(state.active) > 1:
        rounds += 1
        if _round(state):
            continue
        if not _sweep(state):
            break
    assignment = CommunityAssignment.from_labels(state.labels)
    logger.info("Greedy detection: %d communities after %d rounds and %d merges (L=%.6g)",
                assignment.k, rounds, state.merges, state.score)
    return assignment
