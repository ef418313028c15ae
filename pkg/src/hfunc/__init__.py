"""H-functions: constructions, associations, catalog, higher-dimensional compositions."""
