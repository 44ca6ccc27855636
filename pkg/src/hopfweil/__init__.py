"""Exact computations around Weil algebras, the Hopf algebra H_n and cyclic cochains of GL(n)."""

__version__ = "0.1.0"
