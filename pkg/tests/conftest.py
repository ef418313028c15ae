"""Shared fixtures: planted networks and small hand-built blocks."""

import numpy as np
import pytest

from src.kebab_module_loader import load_module

_presets = load_module("src.generator.preset-specs")
_nsm_gen = load_module("src.generator.nsm-generator")
_lsm_gen = load_module("src.generator.lsm-generator")
_net = load_module("src.model.network-schemas")


@pytest.fixture(scope="session")
def planted():
    """Noise-free 4 x 37 planted network: (spec, net, psi)."""
    spec = _presets.planted_sociability_spec()
    net, psi = _nsm_gen.generate(spec, seed=3)
    return spec, net, psi


@pytest.fixture(scope="session")
def small_planted():
    """Noise-free 2 x 20 planted network: (spec, net, psi)."""
    spec = _presets.planted_sociability_spec(sizes=(20, 20))
    net, psi = _nsm_gen.generate(spec, seed=5)
    return spec, net, psi


@pytest.fixture(scope="session")
def mixed_lsm():
    """Two-community noise-free Normal-LSM network: (assignment, net, psi)."""
    assignment = _presets.blocks((37, 37))
    psi = np.concatenate([_presets.psi_grid(37), _presets.psi_grid(37)])
    net = _lsm_gen.generate_lsm(assignment, _presets.mixed_association_lsm_recipes(), seed=1, psis=psi)
    return assignment, net, psi


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def _iid_network(n: int, seed: int):
    g = np.random.default_rng(seed).standard_normal((n, n))
    upper = np.triu(g, k=1)
    return _net.WeightedNetwork(weights=upper + upper.T)


@pytest.fixture
def iid_network():
    """Factory for symmetric networks of i.i.d. N(0, 1) weights with a zero diagonal."""
    return _iid_network
