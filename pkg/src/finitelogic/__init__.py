"""Finite-scale formal-theory workbench."""

__version__ = "0.1.0"
