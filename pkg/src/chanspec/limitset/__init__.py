"""Predicted large-n limit objects: tie arcs, isolated limits and densities."""
from .circles import TieDescriptor, analytic_circles, tie_descriptor
from .density import EndpointWarning, density_integral, subarc_by_theta, subarc_points, theta_increment
from .family import AnalyticFamily, Member, family_from_subsets
from .tracing import (
    ArcSample,
    IsolatedPoint,
    LimitSet,
    TraceConfig,
    default_box,
    isolated_limits,
    polyline_distance,
    trace_limit_set,
)

__all__ = [
    "AnalyticFamily",
    "ArcSample",
    "EndpointWarning",
    "IsolatedPoint",
    "LimitSet",
    "Member",
    "TieDescriptor",
    "TraceConfig",
    "analytic_circles",
    "default_box",
    "density_integral",
    "family_from_subsets",
    "isolated_limits",
    "polyline_distance",
    "subarc_by_theta",
    "subarc_points",
    "theta_increment",
    "tie_descriptor",
    "trace_limit_set",
]
