"""Noncrossing partitions, axial orderings and dual complexes for irreducible affine Coxeter groups."""

from .coxeter import CoxeterSystem, build, parse_spec
from .euclid import Isometry, Reflection, compose, invert, reflection_length

__all__ = ["CoxeterSystem", "Isometry", "Reflection", "build", "compose", "invert", "parse_spec",
           "reflection_length"]
