"""Bootstrap replicates from fitted sociability models."""
