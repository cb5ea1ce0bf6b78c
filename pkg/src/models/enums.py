"""Enum types for lab inputs and tool parameters."""

from typing import Literal

# Boundary arc labels
ArcLabel = Literal[
    "plus",   # spins fixed to +1 outside
    "minus",  # spins fixed to -1 outside
    "free"    # no boundary coupling
]

# Kinds of decorated-graph sites
SiteKind = Literal[
    "vertex",  # lattice vertex
    "mid",     # midedge of a domain edge
    "corner",  # corner at v + (1/4)(+-1 +-i)
    "normal"   # outer midedge reached through a non-domain edge
]

# Spin-crossing functions
GKind = Literal[
    "pmpf",  # + / - / + / free
    "pmpm",  # + / - / + / -
    "pmff"   # + / - / free / free
]

# Observable normalization
Normalization = Literal[
    "raw",        # configuration sum as is
    "normalized"  # divided by 2^(1/4) sqrt(delta) Z(sources, n_b2k)
]

# Vertex resolution rule for the winding
TurnRule = Literal[
    "right",  # always turn right when entering a vertex
    "left"    # always turn left
]

# Interface resolution
InterfaceSide = Literal[
    "rightmost",
    "leftmost"
]
