"""Exact engine for the quotient module of the Taft algebra inside its Drinfeld double."""

__version__ = "0.1.0"
