"""Numerical toolkit for Dirac-type operators, their Bochner splits and gauge-Higgs models."""

__version__ = "0.1.0"
