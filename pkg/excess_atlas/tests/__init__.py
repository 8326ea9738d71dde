"""The package for Excess Atlas tests."""
