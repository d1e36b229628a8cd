"""randwave

Pseudospectral lab for cubic NLS with Wiener-randomized initial data on a
periodic box: expansion towers, residual solves and fitted rate experiments.
"""

__version__ = "1.0.0"
