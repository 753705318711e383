"""Conversion of SU(2) reference frames shared as Bell pairs."""

__version__ = "0.1.0"
