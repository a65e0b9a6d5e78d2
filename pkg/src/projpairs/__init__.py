"""Finite-scale computations with double embedding problems of group pairs."""
