"""Sociability networks - sociability-model generation, estimation, bootstrap and community detection."""
