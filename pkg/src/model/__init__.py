"""Network, assignment, fitted-model and generator-spec schemas plus file I/O."""
