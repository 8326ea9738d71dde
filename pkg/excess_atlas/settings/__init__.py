"""Settings for Excess Atlas, one module per environment."""
