"""Exact-arithmetic construction of Majorana representations of finite groups."""

__version__ = "0.1.0"
