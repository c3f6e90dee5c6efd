"""Trotterized adiabatic Max-Cut heuristic on 3-regular graphs."""

__version__ = "0.1.0"
