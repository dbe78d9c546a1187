"""
Services package for xokde

Contains the density estimation engine, its numerical building blocks and the benchmark services.
"""

__version__ = "1.0.0"
