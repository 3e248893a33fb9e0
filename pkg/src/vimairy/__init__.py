"""Exact variational iteration for the Airy-type Klein-Gordon problem."""

__version__ = "0.1.0"
