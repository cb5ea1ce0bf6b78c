"""Utility modules for the Ising lab."""
