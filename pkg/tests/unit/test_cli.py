import numpy as np
import pandas as pd
import pytest

from src.kebab_module_loader import load_module

_cli = load_module("src.cli.socnet-cli")
_render = load_module("src.cli.heatmap-renderer")
_io = load_module("src.model.model-io")
_net = load_module("src.model.network-schemas")
_presets = load_module("src.generator.preset-specs")


@pytest.fixture
def small_network_files(tmp_path):
    spec_path = tmp_path / "spec.json"
    _io.write_model(_presets.planted_sociability_spec(sizes=(12, 12)), spec_path)
    net_path, labels_path = tmp_path / "net.csv", tmp_path / "labels.txt"
    code = _cli.run(["generate", "--spec", str(spec_path), "--seed", "1", "--out", str(net_path),
                     "--labels-out", str(labels_path), "--psi-out", str(tmp_path / "psi.csv")])
    assert code == _cli.EXIT_OK
    return net_path, labels_path


# ── Exit codes ──────────────────────────────────────────────


def test_missing_subcommand_is_a_usage_error():
    assert _cli.run([]) == _cli.EXIT_USAGE


def test_help_exits_cleanly():
    assert _cli.run(["--help"]) == _cli.EXIT_OK


def test_generate_needs_exactly_one_source(tmp_path):
    assert _cli.run(["generate", "--out", str(tmp_path / "n.csv")]) == _cli.EXIT_USAGE


def test_unknown_mode_is_a_usage_error(tmp_path):
    assert _cli.run(["fit", "--net", "x.csv", "--mode", "bogus", "--out", "m.json"]) == _cli.EXIT_USAGE


def test_missing_input_is_a_data_error(tmp_path):
    code = _cli.run(["fit", "--net", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "m.json")])
    assert code == _cli.EXIT_DATA


def test_asymmetric_network_is_a_data_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,1,2\n5,0,3\n2,3,0\n")
    assert _cli.run(["fit", "--net", str(path), "--out", str(tmp_path / "m.json")]) == _cli.EXIT_DATA


def test_label_count_mismatch_is_a_data_error(tmp_path, small_network_files):
    net_path, _ = small_network_files
    labels = tmp_path / "short.txt"
    labels.write_text("1\n1\n2\n")
    code = _cli.run(["fit", "--net", str(net_path), "--labels", str(labels), "--out", str(tmp_path / "m.json")])
    assert code == _cli.EXIT_DATA


def test_zero_bootstrap_count_is_a_usage_error(tmp_path):
    code = _cli.run(["bootstrap", "--model", str(tmp_path / "m.json"), "--count", "0",
                     "--out-prefix", str(tmp_path / "rep")])
    assert code == _cli.EXIT_USAGE


# ── Pipeline ────────────────────────────────────────────────


def test_generate_fit_bootstrap_pipeline(tmp_path, small_network_files):
    net_path, labels_path = small_network_files
    assert _io.read_network_csv(net_path).n == 24
    assert len(pd.read_csv(tmp_path / "psi.csv", header=None)) == 24

    model_path = tmp_path / "model.json"
    code = _cli.run(["fit", "--net", str(net_path), "--labels", str(labels_path), "--out", str(model_path),
                     "--estimate-out", str(tmp_path / "est.csv"), "--summary-out", str(tmp_path / "summary.csv")])
    assert code == _cli.EXIT_OK
    model = _io.read_fitted_model(model_path)
    assert len(model.pairs) == 3
    assert len(pd.read_csv(tmp_path / "summary.csv")) == 3
    assert _net.validate(_io.read_network_csv(tmp_path / "est.csv")) == []

    prefix = tmp_path / "rep"
    assert _cli.run(["bootstrap", "--model", str(model_path), "--seed", "3", "--count", "2",
                     "--out-prefix", str(prefix)]) == _cli.EXIT_OK
    first, second = (_io.read_network_csv(f"{prefix}_{k}.csv") for k in (1, 2))
    assert first.n == 24
    assert not np.array_equal(first.weights, second.weights)


def test_communities_writes_one_label_per_node(tmp_path, small_network_files):
    net_path, _ = small_network_files
    out = tmp_path / "found.txt"
    code = _cli.run(["communities", "--net", str(net_path), "--method", "spectral", "--replicates", "2",
                     "--out", str(out)])
    assert code == _cli.EXIT_OK
    assert _io.read_labels(out).n == 24


def test_render_infers_the_format_from_the_suffix(tmp_path, small_network_files):
    net_path, labels_path = small_network_files
    out = tmp_path / "heat.pgm"
    assert _cli.run(["render", "--net", str(net_path), "--labels", str(labels_path), "--scale", "2",
                     "--out", str(out)]) == _cli.EXIT_OK
    data = out.read_bytes()
    header = b"P5\n48 48\n255\n"
    assert data.startswith(header)
    assert len(data) == len(header) + 48 * 48


# ── Renderer ────────────────────────────────────────────────


def test_degree_order_within_communities():
    w = np.array([[0.0, 5.0, 1.0, 0.0],
                  [5.0, 0.0, 0.0, 0.0],
                  [1.0, 0.0, 0.0, 2.0],
                  [0.0, 0.0, 2.0, 0.0]])
    a = _net.CommunityAssignment(labels=[1, 1, 2, 2])
    net = _net.WeightedNetwork(weights=w)
    np.testing.assert_array_equal(_render.node_order(net, a), [0, 1, 2, 3])
    np.testing.assert_array_equal(_render.node_order(net, _net.CommunityAssignment(labels=[2, 1, 1, 2])),
                                  [1, 2, 0, 3])
    triangle = _net.WeightedNetwork(weights=np.array([[0.0, 3.0, 1.0], [3.0, 0.0, 1.0], [1.0, 1.0, 0.0]]))
    np.testing.assert_array_equal(_render.node_order(triangle), [2, 0, 1])
    np.testing.assert_array_equal(_render.node_order(triangle, sort="none"), [0, 1, 2])


def test_grayscale_spans_the_range_and_constant_is_gray():
    w = np.array([[0.0, 1.0], [0.5, 1.0]])
    np.testing.assert_array_equal(_render.grayscale(w, np.ones((2, 2), dtype=bool)), [[0, 255], [128, 255]])
    np.testing.assert_array_equal(_render.grayscale(w), [[0, 255], [0, 0]])
    assert np.all(_render.grayscale(np.full((2, 2), 7.0)) == _render.NEUTRAL_GRAY)


def test_constant_network_renders_uniform_gray():
    w = np.full((4, 4), 5.0)
    np.fill_diagonal(w, 0.0)
    pixels = _render.render_pixels(_net.WeightedNetwork(weights=w))
    assert pixels.shape == (4, 4)
    assert np.all(pixels == _render.NEUTRAL_GRAY)


def test_range_ignores_the_diagonal_and_missing_entries():
    w = np.array([[0.0, 2.0, 4.0], [2.0, 0.0, 9.0], [4.0, 9.0, 0.0]])
    missing = np.zeros((3, 3), dtype=bool)
    missing[1, 2] = missing[2, 1] = True
    pixels = _render.render_pixels(_net.WeightedNetwork(weights=w, missing=missing), sort="none")
    np.testing.assert_array_equal(pixels, [[0, 0, 255], [0, 0, 0], [255, 0, 0]])


def test_ppm_pixels_are_rgb():
    net = _net.WeightedNetwork(weights=np.array([[0.0, 1.0], [1.0, 0.0]]))
    pixels = _render.render_pixels(net, fmt="ppm")
    assert pixels.shape == (2, 2, 3)
    assert pixels.dtype == np.uint8


def test_html_heatmap(tmp_path):
    net = _net.WeightedNetwork(weights=np.array([[0.0, 1.0], [1.0, 0.0]]))
    out = tmp_path / "heat.html"
    _render.render_network(net, out, fmt="html")
    assert "plotly" in out.read_text().lower()


def test_unknown_sort_and_format_raise(tmp_path):
    net = _net.WeightedNetwork(weights=np.zeros((2, 2)))
    with pytest.raises(ValueError, match="sort"):
        _render.node_order(net, sort="core")
    with pytest.raises(ValueError, match="format"):
        _render.render_network(net, tmp_path / "x.png", fmt="png")
