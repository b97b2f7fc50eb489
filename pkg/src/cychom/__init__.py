"""Exact homological invariants of finite-dimensional associative algebras."""

__version__ = "0.1.0"
