"""Exact Schur-function expansions of matrix-model partition functions."""

__version__ = "0.1.0"
