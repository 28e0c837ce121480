"""
taulab: computable constructions around measures on the real line, dyadic Cantor product
measures, the translation invariant metrics d_a and free Araki-Woods parameter symbols.
"""

__version__ = "0.1.0"
