"""Unramified central-extension counts over quadratic fields."""

__version__ = "0.1.0"
