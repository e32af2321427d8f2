"""Constructible functions on simplicial complexes and local obstructions to algebraicity."""
from .simplicial import Complex, ComplexError, build_complex, euler_characteristic

__all__ = ["Complex", "ComplexError", "build_complex", "euler_characteristic"]
