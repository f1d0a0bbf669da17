"""Equilateral p-gons for several metrics: orbit structure, test-map search,
index algebra and spectral-sequence bookkeeping."""

from .errors import InvalidInput

__version__ = "0.1.0"

__all__ = ["InvalidInput", "__version__"]
