"""Noise spectra of dissipative two-level fluctuators and their ensembles."""

__version__ = "0.1.0"
