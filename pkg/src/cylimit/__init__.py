"""Periods, mirror data and the limit mixed Hodge structure of one-parameter
Calabi-Yau operators at a point of maximally unipotent monodromy."""

__version__ = "0.1.0"
