"""Exact computation of ellipsoid-into-polydisc embedding capacities."""

__version__ = "0.1.0"
