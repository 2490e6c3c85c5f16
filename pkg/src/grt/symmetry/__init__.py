"""Automorphism groups, orbits, transitivity and orbitals."""

from grt.symmetry.automorphisms import automorphism_group
from grt.symmetry.group import DEFAULT_CAP, PermGroup, compose, cycles, identity, inverse
from grt.symmetry.orbits import (
    OrbitalPartition,
    Transitivity,
    orbit_partition,
    orbital_eigenspaces,
    orbital_matrix,
    orbitals,
    orbits,
    stabilizer,
    transitivity_class,
)

__all__ = [
    "DEFAULT_CAP",
    "OrbitalPartition",
    "PermGroup",
    "Transitivity",
    "automorphism_group",
    "compose",
    "cycles",
    "identity",
    "inverse",
    "orbit_partition",
    "orbital_eigenspaces",
    "orbital_matrix",
    "orbitals",
    "orbits",
    "stabilizer",
    "transitivity_class",
]
