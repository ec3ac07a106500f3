"""Discrete Riemannian geometry on the cross-section."""

from conelab.geometry.fields import make_flat_torus, make_round_sphere
from conelab.geometry.grid import SphereGrid, TorusGrid
from conelab.geometry.tensors import MetricGeometry

__all__ = ["MetricGeometry", "SphereGrid", "TorusGrid", "make_flat_torus", "make_round_sphere"]
