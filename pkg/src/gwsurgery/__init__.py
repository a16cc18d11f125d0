"""Exact GW bookkeeping for flops, small transitions and symplectic cuts."""
from .cohomology import CohClass, CohPullback, FlopLocusData, ThreefoldModel, cup3, cup_product, pullback
from .gluing import (CutModel, SplittingComponent, SplittingType, ZModel, enumerate_splittings,
                     gluing_sum, index_closed, index_log, total_invariant, vanishing_filter)
from .lattice import ClassCoset, HomologyLattice, LatticeMap, apply_map, cone_points, fiber_classes, make_flop_map
from .novikov import NovikovSeries, Truncation, nv_ac_equal, nv_closed_form, nv_expand, nv_mul, nv_substitute, parse, render
from .quantum import QuantumContext, three_point
from .surgery import (InconsistentModelError, SurgerySetup, cup_correction, flop_setup, flop_transform,
                      transition_setup, transition_transform, verify_flop_qc, verify_transition_qc)
from .tables import GWTable, LogGWTable, divisor_reduce, lookup_extended, multiple_cover_value

__all__ = [
    "CohClass", "CohPullback", "FlopLocusData", "ThreefoldModel", "cup3", "cup_product", "pullback",
    "ClassCoset", "HomologyLattice", "LatticeMap", "apply_map", "cone_points", "fiber_classes",
    "make_flop_map", "NovikovSeries", "Truncation", "nv_ac_equal", "nv_closed_form", "nv_expand",
    "nv_mul", "nv_substitute", "parse", "render", "GWTable", "LogGWTable", "divisor_reduce",
    "lookup_extended", "multiple_cover_value", "QuantumContext", "three_point",
    "InconsistentModelError", "SurgerySetup", "cup_correction", "flop_setup", "flop_transform",
    "transition_setup", "transition_transform", "verify_flop_qc", "verify_transition_qc",
    "CutModel", "SplittingComponent", "SplittingType", "ZModel", "enumerate_splittings",
    "gluing_sum", "index_closed", "index_log", "total_invariant", "vanishing_filter",
]
