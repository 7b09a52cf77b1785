"""Densities of the uniform Cantor measure on homogeneous Cantor sets.

The main entry points are re-exported here; see the submodules for the rest.
"""
from .core import EventuallyPeriodicCoding, Params, coding, params_new, parse_coding
from .critical import a_critical, b_critical, classify_lower, classify_upper, critical_table
from .densities import density_report, lower_density, typical_values, upper_density
from .errors import HomCantorError
from .measure import ball_measure, cdf, project

__all__ = [
    "EventuallyPeriodicCoding",
    "HomCantorError",
    "Params",
    "a_critical",
    "b_critical",
    "ball_measure",
    "cdf",
    "classify_lower",
    "classify_upper",
    "coding",
    "critical_table",
    "density_report",
    "lower_density",
    "params_new",
    "parse_coding",
    "project",
    "typical_values",
    "upper_density",
]
