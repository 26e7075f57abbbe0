"""
cartier_lab

Exact computations with the Cartier operator over F_p(t): local solvability
and cokernel classes for the groups Z/p and t x^p = y^p - y, bounded global
searches, and nonperiodicity certificates.
"""

__version__ = "0.1.0"
