"""spherestab: stability numerics for isometric and conformal maps of the
sphere -- deficits, quadratic forms, vector spherical harmonics, the
volume-form operator's eigenstructure, and Moebius-group fitting."""

__version__ = "0.1.0"

from .config import Config
from .quadrature import BallGrid, SphereGrid, build_ball_grid, build_sphere_grid, integrate
from .moments import ball_moment, sphere_moment
from .spheremap import SphereMap, identity_map, linear_map, poly_map, sampled_map

__all__ = [
    "Config",
    "SphereGrid",
    "BallGrid",
    "build_sphere_grid",
    "build_ball_grid",
    "integrate",
    "sphere_moment",
    "ball_moment",
    "SphereMap",
    "identity_map",
    "linear_map",
    "poly_map",
    "sampled_map",
    "__version__",
]
