"""1-currents with coefficients in a normed group: Steiner trees, calibrations, integer flows."""

from .group import GroupElement, GroupSetup, check_axioms, extreme_points, norm_E, norm_Estar, pair

__all__ = ["GroupElement", "GroupSetup", "check_axioms", "extreme_points", "norm_E", "norm_Estar", "pair"]
__version__ = "0.1.0"
