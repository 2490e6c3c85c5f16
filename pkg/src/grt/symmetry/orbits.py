"""Orbits on vertices, edges, arcs and distance classes; orbitals and the orbital matrix."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from grt.errors import PreconditionError
from grt.graph import distances
from grt.linalg import eigendecompose

ORBITAL_EIG_TOL = 1e-7


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def orbit_partition(items, generators, act):
    """Orbits of ``generators`` on ``items`` under the action ``act(perm, item)``.

    Orbits are sorted internally and listed by their smallest member.
    """
    items = list(items)
    index = {x: k for k, x in enumerate(items)}
    uf = _UnionFind(len(items))
    for g in generators:
        for k, x in enumerate(items):
            try:
                uf.union(k, index[act(g, x)])
            except KeyError:
                raise PreconditionError(f"{g} does not preserve the domain (moved {x})") from None
    classes = {}
    for k, x in enumerate(items):
        classes.setdefault(uf.find(k), []).append(x)
    return sorted((sorted(c) for c in classes.values()), key=lambda c: c[0])


def _act_point(g, i):
    return g[i]


def _act_pair(g, pair):
    return (g[pair[0]], g[pair[1]])


def _act_edge(g, e):
    a, b = g[e[0]], g[e[1]]
    return (a, b) if a < b else (b, a)


def orbits(group, domain, graph=None, delta=None):
    """Orbit partition of ``domain``.

    ``domain`` is one of ``"vertices"``, ``"edges"``, ``"arcs"`` (ordered
    adjacent pairs) or ``"distance_pairs"`` (ordered pairs at distance
    ``delta``, needs a connected ``graph``).
    """
    if domain == "vertices":
        return orbit_partition(range(group.n), group.generators, _act_point)
    if graph is None:
        raise PreconditionError(f"domain {domain!r} needs the graph")
    if domain == "edges":
        return orbit_partition(graph.edge_list, group.generators, _act_edge)
    if domain == "arcs":
        return orbit_partition(graph.arcs, group.generators, _act_pair)
    if domain == "distance_pairs":
        table = distances(graph)
        if not table.connected:
            raise PreconditionError("distance classes need a connected graph")
        if delta is None or not 0 <= delta <= table.diam:
            raise PreconditionError(f"delta must lie in 0..{table.diam}, got {delta}")
        return orbit_partition(table.pairs(delta), group.generators, _act_pair)
    raise ValueError(f"unknown domain {domain!r}")


@dataclass(frozen=True)
class Transitivity:
    vertex: bool
    edge: bool
    arc: bool
    distance: bool | None  # None for disconnected graphs

    def to_dict(self):
        return {"vertex": self.vertex, "edge": self.edge, "arc": self.arc, "distance": self.distance}


def transitivity_class(graph, group):
    vertex = len(orbits(group, "vertices")) == 1
    edge = graph.num_edges > 0 and len(orbits(group, "edges", graph)) == 1
    arc = graph.num_edges > 0 and len(orbits(group, "arcs", graph)) == 1
    table = distances(graph)
    if not table.connected:
        distance = None
    else:
        distance = all(
            len(orbit_partition(table.pairs(d), group.generators, _act_pair)) == 1
            for d in range(table.diam + 1)
        )
    return Transitivity(vertex, edge, arc, distance)


def stabilizer(group, i):
    if not 0 <= i < group.n:
        raise PreconditionError(f"vertex {i} out of range")
    return group.stabilizer(i)


@dataclass(frozen=True)
class OrbitalPartition:
    """Orbits of the group on singletons ``{i}`` and unordered pairs ``{i, j}``.

    Pairs are stored as ``(i, j)`` with ``i <= j``; class 0 always holds
    ``(0, 0)`` and classes are numbered by first appearance in lexicographic
    pair order.
    """

    n: int
    classes: tuple
    index: np.ndarray  # index[i, j] = class of {i, j}

    @property
    def num_classes(self):
        return len(self.classes)

    def to_json(self):
        return json.dumps({f"{i},{j}": int(self.index[i, j])
                           for i in range(self.n) for j in range(i, self.n)})


def orbitals(group):
    n = group.n
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    classes = orbit_partition(pairs, group.generators, _act_edge_or_loop)
    index = np.empty((n, n), dtype=np.int64)
    for k, cls in enumerate(classes):
        for i, j in cls:
            index[i, j] = index[j, i] = k
    index.flags.writeable = False
    return OrbitalPartition(n, tuple(tuple(c) for c in classes), index)


def _act_edge_or_loop(g, pair):
    a, b = g[pair[0]], g[pair[1]]
    return (a, b) if a <= b else (b, a)


def orbital_matrix(group, weights=None, seed=None, partition=None):
    """Symmetric matrix constant on orbitals.

    ``weights`` maps class index to value; if omitted, weights are drawn
    i.i.d. uniform on [0, 1) from ``numpy.random.default_rng(seed)``.
    """
    part = orbitals(group) if partition is None else partition
    k = part.num_classes
    if weights is None:
        if seed is None:
            raise PreconditionError("give orbital weights or a seed")
        values = np.random.default_rng(seed).uniform(0.0, 1.0, size=k)
    else:
        missing = [c for c in range(k) if c not in weights]
        if missing:
            raise PreconditionError(f"missing weights for orbitals {missing}")
        values = np.array([float(weights[c]) for c in range(k)])
    return values[part.index]


def orbital_eigenspaces(group, seed=0, tol=ORBITAL_EIG_TOL):
    """Eigenspaces of a seeded orbital matrix: the candidate irreducible decomposition.

    That these are exactly the irreducible invariant subspaces is a
    heuristic; check candidates with
    :func:`grt.realization.irreducibility_test` before relying on them.
    """
    return eigendecompose(orbital_matrix(group, seed=seed), tol)
