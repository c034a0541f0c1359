"""Exact Fitting-ideal computations over integral group rings of finite abelian groups."""

__version__ = "0.1.0"
