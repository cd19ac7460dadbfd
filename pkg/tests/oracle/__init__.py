"""Slow arbitrary-precision reference implementations used only by the tests."""
