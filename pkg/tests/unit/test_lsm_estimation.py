import numpy as np
import pytest
from scipy import stats

from src.kebab_module_loader import load_module

_impute = load_module("src.estimator.diagonal-imputation")
_blocks = load_module("src.estimator.pair-blocks")
_lsm = load_module("src.estimator.lsm-estimator")
_lsm_gen = load_module("src.generator.lsm-generator")
_presets = load_module("src.generator.preset-specs")
_schemas = load_module("src.model.fitted-model-schemas")
_scores = load_module("src.numeric.score-families")
_streams = load_module("src.numeric.random-streams")

ScoreFamily = _scores.ScoreFamily


# ── Diagonal imputation ─────────────────────────────────────


def test_constant_block_imputes_the_constant():
    w = np.full((5, 5), 2.5)
    np.fill_diagonal(w, 0.0)
    np.testing.assert_allclose(np.diag(_impute.impute_diagonal(w)), 2.5)


def test_three_node_example():
    w = np.array([[0.0, 2.0, 4.0], [2.0, 0.0, 6.0], [4.0, 6.0, 0.0]])
    out = _impute.impute_diagonal(w)
    assert out[0, 0] == pytest.approx(0.0)
    np.testing.assert_array_equal(out - np.diag(np.diag(out)), w)


def test_imputation_is_permutation_equivariant(rng):
    upper = np.triu(rng.uniform(size=(6, 6)), k=1)
    w = upper + upper.T
    order = rng.permutation(6)
    np.testing.assert_allclose(np.diag(_impute.impute_diagonal(w[np.ix_(order, order)])),
                               np.diag(_impute.impute_diagonal(w))[order])


def test_additive_block_gets_twice_the_node_effect():
    a = np.array([0.3, -1.0, 0.5, 0.2])
    w = a[:, None] + a[None, :]
    np.fill_diagonal(w, 0.0)
    np.testing.assert_allclose(np.diag(_impute.impute_diagonal(w)), 2 * a)


def test_imputation_needs_three_nodes():
    with pytest.raises(ValueError, match="at least 3"):
        _impute.impute_diagonal(np.zeros((2, 2)))


# ── Normal-score LSM ────────────────────────────────────────


def test_noise_free_within_block_is_recovered(mixed_lsm):
    assignment, net, psi = mixed_lsm
    fit = _lsm.fit_normal_lsm(_blocks.extract_block(net, assignment, 1, 1))
    assert stats.spearmanr(fit.z_i, psi[:37]).statistic == pytest.approx(1.0)
    assert fit.alpha == fit.beta
    assert fit.z_i == fit.z_j
    assert fit.sigma <= 1e-6
    assert not fit.degenerate
    assert all(0 < p < 1 for p in fit.psi_i)


def test_between_block_keeps_the_coefficient_ratio(mixed_lsm):
    assignment, net, psi = mixed_lsm
    fit = _lsm.fit_normal_lsm(_blocks.extract_block(net, assignment, 1, 2))
    assert fit.alpha / fit.beta == pytest.approx(2.0, rel=1e-6)
    assert abs(stats.spearmanr(fit.z_i, psi[:37]).statistic) == pytest.approx(1.0)
    assert abs(stats.spearmanr(fit.z_j, psi[37:]).statistic) == pytest.approx(1.0)
    assert fit.sigma <= 1e-6


def test_one_sided_block_ratio_is_recovered():
    a = _presets.blocks((200, 200))
    half = _streams.substream(8, 0).uniform(0.001, 0.999, size=200)
    psi = np.concatenate([half, half])
    recipes = [
        _schemas.LsmPairRecipe(i=1, j=1, alpha=1.0, beta=1.0),
        _schemas.LsmPairRecipe(i=2, j=2, alpha=1.0, beta=1.0),
        _schemas.LsmPairRecipe(i=1, j=2, alpha=2.0, beta=0.5),
    ]
    net = _lsm_gen.generate_lsm(a, recipes, psis=psi)
    fit = _lsm.fit_normal_lsm(_blocks.extract_block(net, a, 1, 2))
    assert fit.alpha / fit.beta == pytest.approx(4.0, rel=0.05)


def test_constant_block_is_degenerate():
    w = np.full((5, 5), 3.0)
    np.fill_diagonal(w, 0.0)
    fit = _lsm.fit_normal_lsm(_blocks.dense_block(w, within=True))
    assert fit.degenerate
    assert fit.psi_i == [0.5] * 5
    assert fit.gamma == pytest.approx(3.0)


def test_block_without_edges_raises():
    block = _blocks.dense_block(np.ones((3, 3)), within=False)
    empty = _blocks.PairBlock(1, 2, block.rows, block.cols, block.weights, np.zeros((3, 3), dtype=bool))
    with pytest.raises(ValueError, match="no present edges"):
        _lsm.fit_normal_lsm(empty)


def test_missing_entries_are_masked(mixed_lsm):
    assignment, net, psi = mixed_lsm
    block = _blocks.extract_block(net, assignment, 1, 2)
    present = block.present.copy()
    present[0, :5] = False
    fit = _lsm.fit_normal_lsm(_blocks.PairBlock(1, 2, block.rows, block.cols, block.weights, present))
    assert abs(stats.spearmanr(fit.z_i, psi[:37]).statistic) == pytest.approx(1.0)
    assert fit.sigma <= 1e-3


# ── LSM with fitted score families ──────────────────────────


def test_general_fit_agrees_with_normal_ranks(mixed_lsm):
    assignment, net, _ = mixed_lsm
    block = _blocks.extract_block(net, assignment, 1, 1)
    general = _lsm.fit_lsm_general(block)
    normal = _lsm.fit_normal_lsm(block)
    assert stats.spearmanr(general.psi_i, normal.psi_i).statistic == pytest.approx(1.0)
    assert general.h1 is general.h2


def test_general_fit_selects_exponential_scores():
    a = _presets.blocks((200,))
    psi = _streams.substream(3, 0).uniform(0.001, 0.999, size=200)
    recipe = _schemas.LsmPairRecipe(i=1, j=1, alpha=1.0, beta=1.0,
                                    h1=ScoreFamily.EXPONENTIAL, h2=ScoreFamily.EXPONENTIAL)
    net = _lsm_gen.generate_lsm(a, [recipe], psis=psi)
    fit = _lsm.fit_lsm_general(_blocks.extract_block(net, a, 1, 1))
    assert fit.h1 is ScoreFamily.EXPONENTIAL
    edge = 0.5 / 201
    assert min(fit.psi_i) >= edge and max(fit.psi_i) <= 1 - edge


def test_general_fit_needs_families(mixed_lsm):
    assignment, net, _ = mixed_lsm
    with pytest.raises(ValueError, match="score family"):
        _lsm.fit_lsm_general(_blocks.extract_block(net, assignment, 1, 1), families=())
