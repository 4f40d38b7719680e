"""Exact Lin-Lu-Yau curvature on small-degree graphs and Ricci-flat classification tools."""

from __future__ import annotations

__version__ = "0.1.0"

from ricciflat.graph import INF, EdgeRef, Graph, GraphError
from ricciflat.transport import Distribution, TransportResult, wasserstein
from ricciflat.curvature import (
    CurvatureReport,
    is_ricci_flat,
    k_alpha,
    lazy_measure,
    lly_curvature,
)

__all__ = [
    "INF",
    "CurvatureReport",
    "Distribution",
    "EdgeRef",
    "Graph",
    "GraphError",
    "TransportResult",
    "__version__",
    "is_ricci_flat",
    "k_alpha",
    "lazy_measure",
    "lly_curvature",
    "wasserstein",
]
