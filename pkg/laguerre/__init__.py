"""
Laguerre fractional calculus.

Kernel evaluation, the Laguerre fractional integrals and derivatives on the
half-line, their Mellin multipliers and a solver for the associated Volterra
equation of the second kind.
"""

__version__ = "0.1.0"
