"""Secure degrees-of-freedom toolkit for the K-user Gaussian MAC with an
external eavesdropper: degraded secrecy-capacity optimization, alignment
precoding, integer and layered constellation codecs, exact finite-alphabet
secrecy metrics, and a reproducible Monte Carlo harness."""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
