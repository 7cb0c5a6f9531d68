"""Exact verification of Cuntz-Pimsner realizations of Z-graded algebras."""

from grcp.exactlin import GF, QQ, Field, Vector

__version__ = "0.1.0"

__all__ = ["Field", "GF", "QQ", "Vector", "__version__"]
