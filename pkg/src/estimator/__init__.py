"""Estimation: LSM factorization fits, rank-based NSM fits, smoothing, screening, missing edges."""
