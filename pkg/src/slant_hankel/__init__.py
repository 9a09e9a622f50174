"""Exact workbench for k-th order slant Hankel operators on L^2(T^n)."""

__version__ = "0.1.0"
