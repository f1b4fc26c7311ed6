"""Static analysis and translation validation toolkit for a small RTL-like IR."""

__version__ = "0.1.0"
