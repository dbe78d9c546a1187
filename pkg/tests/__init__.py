"""
Tests package for xokde

Contains unit tests for the numerical services and end-to-end benchmark tests.
"""

__version__ = "1.0.0"
