"""
idslab - Integrated Density of States Laboratory

Builds the integrated density of states of ergodic random Schrödinger operators
on periodic graphs over amenable groups, and checks the geometric and analytic
facts the construction rests on against exact and brute-force oracles.
"""

__version__ = "0.1.0"
