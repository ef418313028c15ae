"""Community detection driven by the sociability measure L."""
