"""Verification workbench for constant-principal-curvature orbits of solvable
subgroups in non-compact symmetric spaces."""

__version__ = "0.1.0"
