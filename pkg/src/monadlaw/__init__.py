"""Finite-model checking of equational laws for monad transformer stacks."""

__version__ = "0.1.0"
