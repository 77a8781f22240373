"""Edge orders on Pascal and generalized Pascal diagrams."""

from .barriers import BarrierSet, barrier_edges, barrier_order, barrier_set, default_g, parse_g_table
from .core import (
    BranchingReport,
    FiberAudit,
    OrderAssignment,
    OrderBuilder,
    canonical_order,
    extreme_finite_path,
    fiber_audit,
    horizontal_zero_segments,
    lift_subdiagram_order,
    max_branching_audit,
    minimal_prefix_count,
    mirrored_order,
    restrict_to_pascal,
)
from .guides import ContinuumConstruction, GuidePath, build_guides, continuum_order, direction_path
from .tree import countable_max_order, tree_edges, tree_level_set

__all__ = [
    "BarrierSet",
    "BranchingReport",
    "ContinuumConstruction",
    "FiberAudit",
    "GuidePath",
    "OrderAssignment",
    "OrderBuilder",
    "barrier_edges",
    "barrier_order",
    "barrier_set",
    "build_guides",
    "canonical_order",
    "continuum_order",
    "countable_max_order",
    "default_g",
    "direction_path",
    "extreme_finite_path",
    "fiber_audit",
    "horizontal_zero_segments",
    "lift_subdiagram_order",
    "max_branching_audit",
    "minimal_prefix_count",
    "mirrored_order",
    "parse_g_table",
    "restrict_to_pascal",
    "tree_edges",
    "tree_level_set",
]
