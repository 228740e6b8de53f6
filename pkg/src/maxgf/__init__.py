"""maxgf: exact and asymptotic counting of maximal independent sets and
maximal matchings in forests, cacti and series-parallel graphs."""

from .series import Series, BiSeries, rat
from .systems import (SystemSpec, MARKER, solve_series, solve_numeric,
                      jacobian, spectral_radius)
from .families import (build_model, counting_series, pointed_series,
                       block_series, FAMILIES, STRUCTURES)
from .singularity import branch_point, rho_derivative, constants, check_conditions
from .oracle import (LabeledGraph, member, maximal_is_census,
                     maximal_matching_census, class_census, census_run)

__all__ = [
    "Series", "BiSeries", "rat",
    "SystemSpec", "MARKER", "solve_series", "solve_numeric", "jacobian",
    "spectral_radius",
    "build_model", "counting_series", "pointed_series", "block_series",
    "FAMILIES", "STRUCTURES",
    "branch_point", "rho_derivative", "constants", "check_conditions",
    "LabeledGraph", "member", "maximal_is_census", "maximal_matching_census",
    "class_census", "census_run",
]

__version__ = "0.1.0"
