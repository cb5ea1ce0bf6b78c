"""Low-temperature expansion, spin configurations and FK crossing events."""

from src.lowtemp.configs import ConfigSpace, EdgeConfig, config_weight, enumerate_configs, partition_function
from src.lowtemp.fk import fk_crossing_exact, random_cluster_probability, same_cluster_probability
from src.lowtemp.spins import (
    SpinConfig,
    boltzmann_weight,
    edges_to_spins,
    plus_crossing,
    sample_spins,
    spins_to_edges,
)

__all__ = [
    "ConfigSpace",
    "EdgeConfig",
    "SpinConfig",
    "boltzmann_weight",
    "config_weight",
    "edges_to_spins",
    "enumerate_configs",
    "fk_crossing_exact",
    "partition_function",
    "plus_crossing",
    "random_cluster_probability",
    "same_cluster_probability",
    "sample_spins",
    "spins_to_edges",
]
