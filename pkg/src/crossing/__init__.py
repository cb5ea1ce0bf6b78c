"""FK-Ising and spin crossing probabilities in the scaling limit."""

from src.crossing.fk import RatioTable, fk_crossing_continuum, half_plane_points, rectangle_points
from src.crossing.gfunction import GFunction, G_eval, G_quad, make_g
from src.crossing.spin import crossing_lambda, spin_crossing_prediction

__all__ = [
    "GFunction",
    "G_eval",
    "G_quad",
    "RatioTable",
    "crossing_lambda",
    "fk_crossing_continuum",
    "half_plane_points",
    "make_g",
    "rectangle_points",
    "spin_crossing_prediction",
]
