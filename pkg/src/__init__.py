"""Ising free-boundary lab - fermionic observables, Loewner drifts and crossing probabilities."""

__version__ = "0.1.0"
