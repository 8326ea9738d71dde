"""Helpers shared by the commands and the tests."""
