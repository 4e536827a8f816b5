"""Exact and numerical tools for z-measures on the Young graph and
Ewens / Poisson-Dirichlet structures on the Kingman graph."""

__version__ = "0.1.0"
