"""The discrete fermionic observable and its identities."""

from src.observables.hfunction import HPair, build_H
from src.observables.observable import DiscreteObservable, observable, observable_value
from src.observables.suite import load_fixture, verify_identities
from src.observables.winding import interface, winding

__all__ = [
    "DiscreteObservable",
    "HPair",
    "build_H",
    "interface",
    "load_fixture",
    "observable",
    "observable_value",
    "verify_identities",
    "winding",
]
