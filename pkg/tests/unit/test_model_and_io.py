import numpy as np
import pytest

from src.kebab_module_loader import load_module

_net = load_module("src.model.network-schemas")
_schemas = load_module("src.model.fitted-model-schemas")
_io = load_module("src.model.model-io")
_ecdf = load_module("src.numeric.empirical-cdf")
_catalog = load_module("src.hfunc.h-function-catalog")

WeightedNetwork = _net.WeightedNetwork
CommunityAssignment = _net.CommunityAssignment


def _pair_model(i=1, j=1, n_i=3, n_j=3, **kw):
    psi_i = [0.25, 0.5, 0.75][:n_i]
    psi_j = psi_i if i == j else [0.25, 0.5, 0.75][:n_j]
    fields = dict(i=i, j=j, g_hat=_ecdf.empirical_cdf([1.0, 2.0, 3.0]), h_hat=_catalog.normal_rho(1.0),
                  sigma_hat=0.0, psi_i_wrt_j=psi_i, psi_j_wrt_i=psi_j, mse=0.0)
    fields.update(kw)
    return _schemas.PairModel(**fields)


# ── Network validation ──────────────────────────────────────


def test_well_formed_network_has_no_violations():
    w = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
    assert _net.validate(WeightedNetwork(weights=w)) == []


def test_each_violation_kind_is_reported():
    w = np.array([[1.0, 1.0, np.inf], [2.0, 0.0, 3.0], [np.inf, 3.0, 0.0]])
    mask = np.zeros((3, 3), dtype=bool)
    mask[0, 1] = True
    kinds = {v.kind for v in _net.validate(WeightedNetwork(weights=w, missing=mask))}
    assert kinds == {"non_finite", "symmetry", "diagonal", "missing_symmetry"}


def test_missing_diagonal_is_reported():
    mask = np.eye(2, dtype=bool)
    violations = _net.validate(WeightedNetwork(weights=np.zeros((2, 2)), missing=mask))
    assert [v.kind for v in violations] == ["missing_diagonal", "missing_diagonal"]


def test_non_square_weights_raise():
    with pytest.raises(ValueError, match="square"):
        WeightedNetwork(weights=np.zeros((2, 3)))


def test_empty_missing_mask_collapses_to_none():
    net = WeightedNetwork(weights=np.zeros((3, 3)), missing=np.zeros((3, 3), dtype=bool))
    assert not net.has_missing
    assert net.present_mask().sum() == 6


def test_weights_are_read_only():
    net = WeightedNetwork(weights=np.zeros((2, 2)))
    with pytest.raises(ValueError):
        net.weights[0, 1] = 1.0


# ── Community assignment ────────────────────────────────────


def test_assignment_rejects_gaps_and_zero():
    with pytest.raises(ValueError):
        CommunityAssignment(labels=[1, 3])
    with pytest.raises(ValueError):
        CommunityAssignment(labels=[0, 1])


def test_assignment_from_arbitrary_labels():
    a = CommunityAssignment.from_labels([5, 5, 9, 2])
    assert a.labels == [1, 1, 2, 3]
    assert a.k == 3
    np.testing.assert_array_equal(a.members(1), [0, 1])
    np.testing.assert_array_equal(a.sizes(), [2, 1, 1])
    assert a.pairs() == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]


def test_members_outside_range_raise():
    with pytest.raises(ValueError):
        CommunityAssignment.single(3).members(2)


def test_place_block_mirrors_within_upper_triangle():
    target = np.zeros((3, 3))
    rows = np.arange(3)
    _net.place_block(target, rows, rows, np.arange(9.0).reshape(3, 3), within=True)
    np.testing.assert_array_equal(target, target.T)
    assert target[0, 1] == 1.0 and target[1, 2] == 5.0
    assert np.all(np.diag(target) == 0)


# ── Fitted model records ────────────────────────────────────


def test_pair_model_requires_ordered_indices():
    with pytest.raises(ValueError, match="i <= j"):
        _pair_model(i=2, j=1)


def test_pair_model_without_cdf_must_be_degenerate():
    with pytest.raises(ValueError, match="degenerate"):
        _pair_model(g_hat=None)
    assert _pair_model(g_hat=None, degenerate=True).medianized


def test_psi_must_lie_inside_unit_interval():
    with pytest.raises(ValueError):
        _pair_model(i=1, j=2, psi_i_wrt_j=[0.0, 0.5, 0.75])


def test_signal_scale_and_scores():
    p = _pair_model(sigma_hat=1.0)
    assert p.signal_scale == pytest.approx(1 / np.sqrt(2))
    scores = p.signal_scores()
    assert scores.shape == (3, 3)
    assert scores[1, 1] == pytest.approx(0.0, abs=1e-12)


def test_fitted_model_needs_every_pair_once():
    a = CommunityAssignment(labels=[1, 1, 1, 2, 2, 2])
    with pytest.raises(ValueError, match="exactly one entry"):
        _schemas.FittedModel(assignment=a, pairs=[_pair_model(1, 1), _pair_model(2, 2)])
    model = _schemas.FittedModel(assignment=a, pairs=[_pair_model(1, 1), _pair_model(1, 2), _pair_model(2, 2)])
    assert model.pair(2, 1).i == 1


def test_fitted_model_checks_psi_lengths():
    a = CommunityAssignment(labels=[1, 1, 1, 1])
    with pytest.raises(ValueError, match="psi lengths"):
        _schemas.FittedModel(assignment=a, pairs=[_pair_model(1, 1)])


def test_explicit_psi_lengths_must_match_sizes():
    a = CommunityAssignment(labels=[1, 1, 2])
    recipes = [_schemas.PairRecipe(i=i, j=j, h=_catalog.exp_gamma(), marginal=_catalog.Distribution.uniform())
               for i, j in a.pairs()]
    with pytest.raises(ValueError, match="explicit psi lengths"):
        _schemas.GeneratorSpec(assignment=a, pairs=recipes,
                               psi_mode=_schemas.PsiMode(kind="explicit", values=[[0.5], [0.5]]))


# ── File I/O ────────────────────────────────────────────────


def test_network_csv_keeps_full_precision(tmp_path):
    w = np.array([[0.0, 1 / 3, np.pi], [1 / 3, 0.0, -1e-300], [np.pi, -1e-300, 0.0]])
    path = tmp_path / "net.csv"
    _io.write_network_csv(WeightedNetwork(weights=w), path)
    np.testing.assert_array_equal(_io.read_network_csv(path).weights, w)


def test_sparse_read_marks_zeros_missing(tmp_path):
    path = tmp_path / "net.csv"
    path.write_text("0,0,2\n0,0,3\n2,3,0\n")
    net = _io.read_network_csv(path, sparse=True)
    assert net.missing[0, 1] and net.missing[1, 0]
    assert not net.missing[0, 0]
    assert net.missing_fraction() == pytest.approx(2 / 6)


def test_non_square_csv_raises(tmp_path):
    path = tmp_path / "net.csv"
    path.write_text("0,1,2\n1,0,3\n")
    with pytest.raises(ValueError, match="square"):
        _io.read_network_csv(path)


def test_labels_round_trip(tmp_path):
    path = tmp_path / "labels.txt"
    _io.write_labels(CommunityAssignment(labels=[1, 2, 2, 1]), path)
    assert _io.read_labels(path).labels == [1, 2, 2, 1]


def test_non_integer_labels_raise(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("1\nx\n")
    with pytest.raises(ValueError, match="integers"):
        _io.read_labels(path)


def test_fitted_model_json_round_trip(tmp_path):
    a = CommunityAssignment(labels=[1, 1, 1, 2, 2, 2])
    model = _schemas.FittedModel(assignment=a, pairs=[
        _pair_model(1, 1), _pair_model(1, 2, spurious=True), _pair_model(2, 2, sigma_hat=0.5)])
    path = tmp_path / "model.json"
    _io.write_model(model, path)
    assert _io.read_fitted_model(path) == model


def test_generator_spec_json_round_trip(tmp_path, small_planted):
    spec = small_planted[0]
    path = tmp_path / "spec.json"
    _io.write_model(spec, path)
    assert _io.read_generator_spec(path) == spec
