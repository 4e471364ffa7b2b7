"""
PPC Toolkit.

Pair-correlation statistics, Weyl exponential sums and kernel certificates
for point sequences on the d-dimensional torus.
"""

__version__ = "1.0.0"
