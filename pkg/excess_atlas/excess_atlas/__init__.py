"""Exact and asymptotic enumeration of connected graphs by excess."""
