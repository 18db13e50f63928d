"""Exact-arithmetic toolkit for quasimodular and weak Jacobi form rings,
the Igusa cusp form chi_10 and the Laurent expansion of -1/chi_10, and
constant-term machinery for multivariate elliptic functions."""

__version__ = "0.1.0"
