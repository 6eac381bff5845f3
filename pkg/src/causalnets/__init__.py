"""Causal structure of local nets: geometry, operator algebras, lattice fields and circuits."""
from . import algebra, geometry, lattice_field, net_verifier, protocols

__all__ = ["algebra", "geometry", "lattice_field", "net_verifier", "protocols"]
__version__ = "0.1.0"
