"""Spectral, balanced and symmetric realizations of finite graphs."""

from grt.errors import (
    CapExceededError,
    GraphFormatError,
    NotDistanceRegularError,
    NotSymmetricError,
    PreconditionError,
)
from grt.graph import Graph, cartesian_product, catalog, catalog_coordinates, distances, parse_graph, serialize_graph
from grt.linalg import Spectrum, Subspace, eigendecompose, graph_spectrum, project, subspace_relation
from grt.realization import (
    Realization,
    Representation,
    equivalent,
    extract_representation,
    irreducibility_test,
    irreducible_components,
    is_balanced,
    is_spectral,
    normalize,
    skeleton,
    spectral_realization,
    sphericity,
)
from grt.symmetry import PermGroup, automorphism_group, orbitals, orbits, transitivity_class

__version__ = "0.1.0"


def __getattr__(name):
    # scikit-learn is imported only when the estimator is requested
    if name == "SpectralRealizer":
        from grt.estimators import SpectralRealizer

        return SpectralRealizer
    raise AttributeError(f"module 'grt' has no attribute {name!r}")


__all__ = [
    "CapExceededError",
    "Graph",
    "GraphFormatError",
    "NotDistanceRegularError",
    "NotSymmetricError",
    "PermGroup",
    "PreconditionError",
    "Realization",
    "Representation",
    "SpectralRealizer",
    "Spectrum",
    "Subspace",
    "automorphism_group",
    "cartesian_product",
    "catalog",
    "catalog_coordinates",
    "distances",
    "eigendecompose",
    "equivalent",
    "extract_representation",
    "graph_spectrum",
    "irreducibility_test",
    "irreducible_components",
    "is_balanced",
    "is_spectral",
    "normalize",
    "orbitals",
    "orbits",
    "parse_graph",
    "project",
    "serialize_graph",
    "skeleton",
    "spectral_realization",
    "sphericity",
    "subspace_relation",
    "transitivity_class",
]
