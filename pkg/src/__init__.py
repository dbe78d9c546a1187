"""
Source code package for xokde

Online multivariate kernel density estimation and its benchmark harness.
"""

__version__ = "1.0.0"
