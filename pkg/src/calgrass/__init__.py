"""Calibrations on oriented Grassmannians and exact spectral-sequence bookkeeping."""

__version__ = "0.1.0"
