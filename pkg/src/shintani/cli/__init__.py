"""Command-line drivers, run manifests and verification reports."""
