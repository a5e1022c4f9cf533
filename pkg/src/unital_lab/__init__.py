"""Quantum channels, unitality and entropy gain for systems coupled to reservoirs."""

__version__ = "0.1.0"
