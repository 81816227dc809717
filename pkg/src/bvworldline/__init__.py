"""Exact BV/BRST verification for worldline models: jets, antibrackets, Clifford data, TW gluing."""

from __future__ import annotations

__version__ = "0.1.0"

from .jet_algebra import JetPolynomial, ModelAlgebra, Q, TruncationParams  # noqa: E402

__all__ = ["JetPolynomial", "ModelAlgebra", "Q", "TruncationParams", "__version__"]
