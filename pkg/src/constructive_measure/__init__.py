"""Exact finite-scale measure and integration kernel.

Complemented subsets, pre-measure spaces, simple functions and their
integral, and the completion of simple functions to summable sequences,
all over finite ground sets with exact rational arithmetic and modulated
Cauchy reals where limits are involved.
"""

from .complemented import ComplementedSubset, GroundSet, IndicatorFn, PartialFn
from .premeasure import PreMeasureSpace, check_pms, dirac, table_measure, weighted_counting
from .reals import ModulatedReal, Ordering, approx_to, compare_at, pair, real_from_rational, sum_series, unpair
from .report import Check, CheckConfig, Report
from .simple import SimpleFunction, check_pis_simple, disjrep, integral, sf_equal

__version__ = "0.1.0"

__all__ = [
    "Check",
    "CheckConfig",
    "ComplementedSubset",
    "GroundSet",
    "IndicatorFn",
    "ModulatedReal",
    "Ordering",
    "PartialFn",
    "PreMeasureSpace",
    "Report",
    "SimpleFunction",
    "approx_to",
    "check_pis_simple",
    "check_pms",
    "compare_at",
    "dirac",
    "disjrep",
    "integral",
    "pair",
    "real_from_rational",
    "sf_equal",
    "sum_series",
    "table_measure",
    "unpair",
    "weighted_counting",
]
