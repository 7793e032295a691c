"""Numerics for Moebius-weighted sums of the Vasyunin-Wilton function g and the
Nyman-Beurling distance."""
from .errors import AccuracyError, DomainError, IntegrityError, ResourceError, SolverError

__version__ = "0.1.0"

__all__ = ["AccuracyError", "DomainError", "IntegrityError", "ResourceError", "SolverError", "__version__"]
