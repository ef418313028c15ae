"""Network generators: H-Normal NSM, LSM, sparsification, external noise."""
