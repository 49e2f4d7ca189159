"""Exact exterior-algebra engine for continuum defect geometry in 3D."""

__version__ = "0.1.0"
