"""File persistence: dense CSV networks, label files, JSON models and specs."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from src.kebab_module_loader import load_module

_net = load_module("src.model.network-schemas")
_schemas = load_module("src.model.fitted-model-schemas")

WeightedNetwork = _net.WeightedNetwork
CommunityAssignment = _net.CommunityAssignment

logger = logging.getLogger(__name__)

_FLOAT_FORMAT = "%.17g"


def read_network_csv(path: str | Path, sparse: bool = False) -> WeightedNetwork:
    """Read an n x n comma-separated weight matrix (no header).

    Args:
        path: CSV file.
        sparse: Treat off-diagonal zeros as missing edges.

    Raises:
        ValueError: non-square or non-numeric content.
    """
    frame = pd.read_csv(path, header=None, dtype=float, skipinitialspace=True, float_precision="round_trip")
    weights = frame.to_numpy()
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise ValueError(f"{path}: expected a square matrix, got shape {weights.shape}")
    missing = None
    if sparse:
        missing = (weights == 0) & ~np.eye(weights.shape[0], dtype=bool)
    net = WeightedNetwork(weights=weights, missing=missing)
    logger.info("Read %d-node network from %s (%.1f%% missing)", net.n, path, 100 * net.missing_fraction())
    return net


def write_network_csv(net: WeightedNetwork, path: str | Path) -> None:
    """Write weights with 17 significant digits; missing edges are written as 0."""
    weights = np.where(net.missing_mask(), 0.0, net.weights)
    pd.DataFrame(weights).to_csv(path, header=False, index=False, float_format=_FLOAT_FORMAT)


def read_labels(path: str | Path) -> CommunityAssignment:
    """One integer community id per line; ids are kept as written."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    try:
        labels = [int(ln) for ln in lines]
    except ValueError as exc:
        raise ValueError(f"{path}: labels must be integers ({exc})") from exc
    return CommunityAssignment(labels=labels)


def write_labels(assignment: CommunityAssignment, path: str | Path) -> None:
    Path(path).write_text("".join(f"{label}\n" for label in assignment.labels))


def write_model(model, path: str | Path) -> None:
    """Write a FittedModel or GeneratorSpec as JSON."""
    Path(path).write_text(model.model_dump_json(indent=2))


def read_fitted_model(path: str | Path):
    return _schemas.FittedModel.model_validate_json(Path(path).read_text())


def read_generator_spec(path: str | Path):
    return _schemas.GeneratorSpec.model_validate_json(Path(path).read_text())
