"""Management commands of Excess Atlas."""
