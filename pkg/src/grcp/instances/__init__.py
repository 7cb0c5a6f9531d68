"""Builders for concrete graded algebras."""
