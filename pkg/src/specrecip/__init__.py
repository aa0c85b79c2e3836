"""Numerical toolkit for spectral reciprocity: kernels, Mellin transforms,
exponential sums, spectral transforms and the oscillatory integrals around them."""

__version__ = "0.1.0"

from .errors import DomainError, NonConvergenceError, ParameterError, PoleError, SpecRecipError

__all__ = ["DomainError", "NonConvergenceError", "ParameterError", "PoleError", "SpecRecipError",
           "__version__"]
