"""Grassmannian codes, q-covering designs and their bounds over finite fields."""

__version__ = "0.1.0"
