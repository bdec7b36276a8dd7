"""Exact arithmetic in the degree-3 division algebra over Q2 and class censuses of U1/Uk."""

from .algebra import AlgebraConfig, AlgebraElement, d_inv, d_mul, d_valuation, lie_bracket, reduced_norm, reduced_trace
from .census import (
    CensusReport,
    ClassPartition,
    brute_force_partition,
    centralizer,
    conjugacy_partition,
    fast_census,
    full_census,
    order4_real_scan,
    parity_and_bound_checks,
    real_class_count,
)
from .checks import Check
from .padic import (
    ResidueFieldElement,
    TruncatedInteger,
    UnramifiedElement,
    f8_artin_schreier_solvable,
    f8_power_map_bijective,
    hensel_lift_cubic,
    teichmuller,
)
from .quotient import (
    CosetElement,
    InfeasibleError,
    QuotientContext,
    canonicalize,
    commutator,
    element_order,
    enumerate_subquotient,
    index2_subgroups,
    layer_of,
    q_inv,
    q_mul,
)
from .verify import run_suite

__all__ = [
    "AlgebraConfig", "AlgebraElement", "CensusReport", "Check", "ClassPartition", "CosetElement",
    "InfeasibleError", "QuotientContext", "ResidueFieldElement", "TruncatedInteger", "UnramifiedElement",
    "brute_force_partition", "canonicalize", "centralizer", "commutator", "conjugacy_partition", "d_inv",
    "d_mul", "d_valuation", "element_order", "enumerate_subquotient", "f8_artin_schreier_solvable",
    "f8_power_map_bijective", "fast_census", "full_census", "hensel_lift_cubic", "index2_subgroups",
    "layer_of", "lie_bracket", "order4_real_scan", "parity_and_bound_checks", "q_inv", "q_mul",
    "real_class_count", "reduced_norm", "reduced_trace", "run_suite", "teichmuller",
]
