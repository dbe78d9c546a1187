"""
Utils package for xokde

Contains exceptions, validators, formatters, constants and logging helpers.
"""

__version__ = "1.0.0"
