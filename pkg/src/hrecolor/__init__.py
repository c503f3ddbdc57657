"""Reconfiguration of graph homomorphisms into targets with the
monochromatic neighborhood property."""

from .graph_core import Graph, Instance

__version__ = "0.1.0"
__all__ = ["Graph", "Instance"]
