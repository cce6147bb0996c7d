"""Infinity branches and generalized asymptotes of algebraic space curves."""

__version__ = "0.1.0"
