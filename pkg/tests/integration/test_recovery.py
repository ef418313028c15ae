"""End-to-end Monte Carlo checks on planted networks. Run with ``pytest -m slow``."""

import numpy as np
import pytest
from scipy import stats
from scipy.optimize import linprog
from sklearn.metrics import adjusted_rand_score

from src.kebab_module_loader import load_module

_net = load_module("src.model.network-schemas")
_catalog = load_module("src.hfunc.h-function-catalog")
_presets = load_module("src.generator.preset-specs")
_nsm_gen = load_module("src.generator.nsm-generator")
_blocks = load_module("src.estimator.pair-blocks")
_nsm = load_module("src.estimator.nsm-estimator")
_missing = load_module("src.estimator.missing-edge-estimator")
_fitter = load_module("src.estimator.network-fitter")
_boot = load_module("src.bootstrap.network-bootstrap")
_measure = load_module("src.community.measure-l")
_greedy = load_module("src.community.greedy-communities")
_spectral = load_module("src.community.spectral-communities")
_embedding = load_module("src.community.normalized-embedding")

pytestmark = pytest.mark.slow

FitOptions = _fitter.FitOptions
CommunityAssignment = _net.CommunityAssignment


def _within_edges(net, assignment) -> np.ndarray:
    labels = assignment.as_array()
    iu = np.triu_indices(net.n, k=1)
    same = labels[iu[0]] == labels[iu[1]]
    return net.weights[iu][same]


def _residual_variance(sigma: float) -> float:
    return sigma**2 / (1.0 + sigma**2)


@pytest.fixture(scope="module")
def noisy_fit():
    """Fit of the planted network at sigma = 0.15: (spec, net, model)."""
    spec = _presets.planted_sociability_spec(sigma_within=0.15, sigma_between=0.15)
    net, _ = _nsm_gen.generate(spec, seed=3)
    return spec, net, _fitter.fit_network(net, spec.assignment)


# ── Estimation ──────────────────────────────────────────────


def test_planted_pairs_survive_the_screen(planted):
    spec, net, _ = planted
    model = _fitter.fit_network(net, spec.assignment, FitOptions(screen=True, replicates=19, seed=2))
    assert not any(p.spurious for p in model.pairs)


def test_iid_blocks_are_flagged_spurious(iid_network):
    flagged = 0
    for seed in range(20):
        net = iid_network(20, 100 + seed)
        options = FitOptions(screen=True, replicates=99, seed=seed, workers=1)
        flagged += _fitter.fit_pair(net, CommunityAssignment.single(20), 1, 1, options).spurious
    assert flagged >= 18


def test_disassortative_within_pairs_are_spurious():
    net, assignment = _presets.disassortative_network(sizes=(25, 25, 25, 25), seed=8)
    model = _fitter.fit_network(net, assignment, FitOptions(screen=True, replicates=19, seed=8))
    within = [p for p in model.pairs if p.within]
    between = [p for p in model.pairs if not p.within]
    assert sum(p.spurious for p in within) >= 3
    assert not any(p.spurious for p in between)


def test_noise_free_74_node_block_selects_the_true_h():
    spec = _presets.planted_sociability_spec(sizes=(74,))
    net, psi = _nsm_gen.generate(spec, seed=4)
    pair = _nsm.fit_h_normal_nsm(_blocks.extract_block(net, spec.assignment, 1, 1))
    truth = spec.recipe(1, 1).h
    assert (pair.h_hat.family, pair.h_hat.association) == (truth.family, truth.association)
    assert pair.sigma_hat <= 0.02
    # rank-level psi-hat leaves a residual of about 0.009 at this size
    assert pair.mse < 0.012
    assert stats.spearmanr(pair.psi_i_wrt_j, psi).statistic == pytest.approx(1.0)


def test_small_noise_adds_its_residual_variance(planted):
    spec, clean_net, psi = planted
    clean = _fitter.fit_network(clean_net, spec.assignment)
    noisy_spec = _presets.planted_sociability_spec(sigma_within=0.05, sigma_between=0.05)
    noisy_net, _ = _nsm_gen.generate(noisy_spec, seed=3)
    noisy = _fitter.fit_network(noisy_net, spec.assignment)
    target = _residual_variance(0.05)
    for pair in noisy.pairs:
        excess = pair.mse - clean.pair(pair.i, pair.j).mse
        assert target / 2 <= excess <= 2 * target, (pair.i, pair.j, excess)
        if pair.within:
            truth = psi[spec.assignment.members(pair.i)]
            assert stats.spearmanr(pair.psi_i_wrt_j, truth).statistic >= 0.95


def test_external_noise_keeps_the_sociability_order():
    spec = _presets.planted_sociability_spec(external_noise_sd=6.0)
    net, psi = _nsm_gen.generate(spec, seed=3)
    model = _fitter.fit_network(net, spec.assignment)
    for pair in (p for p in model.pairs if p.within):
        truth = psi[spec.assignment.members(pair.i)]
        assert stats.spearmanr(pair.psi_i_wrt_j, truth).statistic >= 0.9


# ── Missing edges ───────────────────────────────────────────


def test_missing_edge_iteration_converges_at_20_percent_deletion(planted):
    spec, clean, _ = planted
    sparse, _ = _nsm_gen.generate(_presets.planted_sociability_spec(retention=0.8), seed=3)
    block = _blocks.extract_block(sparse, spec.assignment, 1, 1)
    truth = _blocks.extract_block(clean, spec.assignment, 1, 1).weights
    result = _missing.fit_missing(block)
    assert result.converged
    assert result.iterations <= _missing.DEFAULT_MAX_ITERS
    held_out = block.missing
    assert stats.spearmanr(result.imputed[held_out], truth[held_out]).statistic >= 0.9


def test_heavy_deletion_still_ranks_held_out_edges(planted):
    spec, clean, _ = planted
    sparse, _ = _nsm_gen.generate(_presets.planted_sociability_spec(retention=0.25), seed=3)
    estimate = _fitter.estimated_network(_fitter.fit_network(sparse, spec.assignment)).weights
    held_out = np.triu(sparse.missing_mask(), k=1)
    assert held_out.sum() > 0.7 * spec.assignment.n * (spec.assignment.n - 1) / 2
    assert stats.spearmanr(estimate[held_out], clean.weights[held_out]).statistic >= 0.5


# ── Bootstrap ───────────────────────────────────────────────


def test_bootstrap_preserves_per_pair_spread(noisy_fit):
    spec, net, model = noisy_fit
    replicates = _boot.bootstrap_replicates(model, seed=11, count=50)
    for pair in model.pairs:
        original = _blocks.extract_block(net, spec.assignment, pair.i, pair.j)
        base = float(np.std(pair.g_hat.normal_scores(original.edge_values())))
        spreads = [
            np.std(pair.g_hat.normal_scores(_blocks.extract_block(rep, spec.assignment, pair.i, pair.j).edge_values()))
            for rep in replicates
        ]
        assert float(np.mean(spreads)) == pytest.approx(base, rel=0.15), (pair.i, pair.j)


# ── Generation ──────────────────────────────────────────────


def test_independent_pairs_follow_the_marginal():
    recipe = _presets.planted_sociability_spec().recipe(1, 1)
    rng = np.random.default_rng(17)
    psi = rng.uniform(0.0, 1.0, size=(2, 2000))
    weights = np.diag(_nsm_gen.pair_block(recipe, psi[0], psi[1], rng))
    assert stats.kstest(weights, stats.uniform(0.0, 150.0).cdf).statistic < 0.05


def test_noise_free_weights_stay_inside_their_marginals(planted):
    spec, net, _ = planted
    within = _within_edges(net, spec.assignment)
    labels = spec.assignment.as_array()
    iu = np.triu_indices(net.n, k=1)
    between = net.weights[iu][labels[iu[0]] != labels[iu[1]]]
    assert within.min() >= 0.0 and within.max() <= 150.0
    assert between.min() >= 0.0 and between.max() <= 100.0
    assert within.max() > 100.0


def test_large_noise_washes_out_the_structure(planted):
    spec, clean, _ = planted
    noisy_spec = _presets.planted_sociability_spec(sigma_within=100.0)
    noisy, _ = _nsm_gen.generate(noisy_spec, seed=3)
    a = _within_edges(clean, spec.assignment)
    b = _within_edges(noisy, spec.assignment)
    assert abs(stats.spearmanr(a, b).statistic) < 0.15


# ── Community detection ─────────────────────────────────────


def test_spectral_recovers_planted_communities(planted):
    spec, net, _ = planted
    found = _spectral.spectral_communities(net, replicates=10, seed=1)
    assert adjusted_rand_score(spec.assignment.labels, found.labels) == 1.0


def test_greedy_recovers_planted_communities(planted):
    spec, net, _ = planted
    found = _greedy.greedy_communities(net)
    assert adjusted_rand_score(spec.assignment.labels, found.labels) == 1.0


def test_truth_scores_at_least_as_well_as_either_detector(planted):
    spec, net, _ = planted
    truth = _measure.measure_l(net, spec.assignment).value
    for found in (_greedy.greedy_communities(net), _spectral.spectral_communities(net, replicates=10, seed=1)):
        assert truth >= _measure.measure_l(net, found).value - 1e-9


def test_spectral_stops_at_one_community_without_structure(iid_network):
    single = sum(_spectral.spectral_communities(iid_network(20, 300 + seed), replicates=10, seed=seed).k == 1
                 for seed in range(20))
    assert single >= 18


def test_mixed_lsm_embedding_is_linearly_separable(mixed_lsm):
    assignment, net, _ = mixed_lsm
    points, _ = _embedding.normalized_embedding(net, dims=2)
    y = np.where(assignment.as_array() == 1, 1.0, -1.0)
    design = np.hstack([points, np.ones((net.n, 1))])
    # y_u (w . x_u + b) >= 1 for every node
    result = linprog(np.zeros(design.shape[1]), A_ub=-y[:, None] * design, b_ub=-np.ones(net.n),
                     bounds=[(None, None)] * design.shape[1], method="highs")
    assert result.status == 0
