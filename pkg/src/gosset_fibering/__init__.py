"""Combinatorics of the right-angled polytopes P^3..P^8, their manifolds and diagonal maps."""

from .status import Status

__version__ = "0.1.0"

__all__ = ["Status", "__version__"]
