"""Fixture generation and report diffing for the rbsdlab acceptance suite.

This package never imports rbsdlab: fixtures are produced by independent
computations (sympy number theory, character-sum point counts, numerical
quadrature for periods, smoothed Dirichlet series for L-values, the genus
formula for dimensions) and consumed by the primary suite through the
documented JSON files only.
"""

__version__ = "0.1.0"
