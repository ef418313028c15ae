"""Numerical kernels: distributions, empirical CDFs, rank-one factorization, eigen, k-means, RNG."""
