"""Additive functionals of conditioned Galton-Watson trees.

Samplers, single-pass evaluators, cut-off error envelopes, brute-force
oracles and a Monte Carlo harness. See ``README.md`` for an overview.
"""
from .errors import GWError
from .kernels import BACKEND
from .trees import LevelProfile, Tree, build_tree, fringe_at, level_profile, truncate

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GWError",
    "LevelProfile",
    "Tree",
    "build_tree",
    "fringe_at",
    "level_profile",
    "truncate",
    "__version__",
]
