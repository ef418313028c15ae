"""Command-line surface and heatmap rendering."""
