"""Möbius autocorrelation over F_q[x], computed two independent ways."""

__version__ = "0.1.0"
