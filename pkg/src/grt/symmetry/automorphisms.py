"""Automorphism generators by individualization-refinement with backtracking.

The search follows the leftmost path of the refinement tree (always
individualizing the first vertex of the first non-singleton cell) to a
discrete partition. Working from the deepest level upward, it then looks for
automorphisms that fix the earlier base points and move the level's base
point to each other vertex of its cell, skipping targets already in the orbit
of the generators found so far. The generators therefore form a strong
generating set for the base, and the group order is the product of the basic
orbit lengths.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass

import numpy as np

from grt.errors import CapExceededError, PreconditionError
from grt.symmetry.group import PermGroup

logger = logging.getLogger(__name__)

MAX_VERTICES = 500
DEFAULT_NODE_CAP = 2_000_000


def refine(adj, labels):
    """Coarsest equitable refinement of an ordered partition.

    ``labels[v]`` is the cell index of ``v``; cells are split by the vector of
    neighbour counts into every cell and the subcells are ordered by that
    vector, so the result (and the returned trace digest) is
    isomorphism-invariant.
    """
    n = adj.shape[0]
    digest = hashlib.blake2b(digest_size=16)
    labels = np.asarray(labels, dtype=np.int64)
    k = int(labels.max()) + 1
    while True:
        onehot = np.zeros((n, k), dtype=np.int64)
        onehot[np.arange(n), labels] = 1
        keys = np.column_stack([labels, adj @ onehot])
        uniq, inv = np.unique(keys, axis=0, return_inverse=True)
        digest.update(np.ascontiguousarray(uniq).tobytes())
        inv = inv.reshape(-1)
        if len(uniq) == k:
            return inv, digest.hexdigest()
        labels, k = inv, len(uniq)


def individualize(labels, v):
    """Split ``v`` off in front of its cell."""
    c = labels[v]
    out = np.where(labels > c, labels + 1, labels)
    out = np.where(labels == c, c + 1, out)
    out[v] = c
    return out


@dataclass
class _Node:
    labels: np.ndarray
    trace: str
    target: int | None  # label of the target cell, None at a leaf
    chosen: int | None


def _target_cell(labels):
    counts = np.bincount(labels)
    big = np.flatnonzero(counts > 1)
    return int(big[0]) if big.size else None


class _Search:
    def __init__(self, adj, node_cap):
        self.adj = adj
        self.n = adj.shape[0]
        self.node_cap = node_cap
        self.nodes_visited = 0

    def child(self, labels, v):
        self.nodes_visited += 1
        if self.nodes_visited > self.node_cap:
            raise CapExceededError(f"automorphism search exceeded {self.node_cap} nodes")
        return refine(self.adj, individualize(labels, v))

    def leftmost_path(self, root_labels, root_trace):
        path = []
        labels, trace = root_labels, root_trace
        while True:
            t = _target_cell(labels)
            chosen = None if t is None else int(np.flatnonzero(labels == t)[0])
            path.append(_Node(labels, trace, t, chosen))
            if t is None:
                return path
            labels, trace = self.child(labels, chosen)

    def leaf_map(self, left, right):
        perm = np.empty(self.n, dtype=np.int64)
        perm[np.argsort(left)] = np.argsort(right)
        return perm

    def is_automorphism(self, perm):
        return np.array_equal(self.adj[np.ix_(perm, perm)], self.adj)

    def match(self, path, level, labels):
        """Find an automorphism mapping ``path[level:]`` onto a branch under ``labels``."""
        node = path[level]
        if node.target is None:
            perm = self.leaf_map(node.labels, labels)
            return perm if self.is_automorphism(perm) else None
        nxt = path[level + 1]
        for y in np.flatnonzero(labels == node.target):
            child, trace = self.child(labels, int(y))
            if trace != nxt.trace:
                continue
            found = self.match(path, level + 1, child)
            if found is not None:
                return found
        return None


def _orbit(point, gens):
    seen = {point}
    queue = [point]
    for p in queue:
        for g in gens:
            q = int(g[p])
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def automorphism_group(g, node_cap=DEFAULT_NODE_CAP, cap=None):
    """Generators of Aut(g) as a :class:`PermGroup`.

    Every returned generator maps the adjacency matrix onto itself exactly.
    Raises :class:`CapExceededError` when the search tree grows past
    ``node_cap`` nodes.
    """
    if g.n > MAX_VERTICES:
        raise PreconditionError(f"automorphism search is limited to {MAX_VERTICES} vertices")
    adj = np.asarray(g.adjacency, dtype=np.int64)
    search = _Search(adj, node_cap)
    root, trace = refine(adj, np.zeros(g.n, dtype=np.int64))
    path = search.leftmost_path(root, trace)

    gens = []
    orbit_sizes = []
    for level in range(len(path) - 2, -1, -1):
        node = path[level]
        x = node.chosen
        orbit = _orbit(x, gens)
        for y in np.flatnonzero(node.labels == node.target):
            y = int(y)
            if y in orbit:
                continue
            child, child_trace = search.child(node.labels, y)
            if child_trace != path[level + 1].trace:
                continue
            perm = search.match(path, level + 1, child)
            if perm is not None:
                gens.append(perm)
                orbit = _orbit(x, gens)
        orbit_sizes.append(len(orbit))
    logger.debug("automorphism search: %d nodes, %d generators", search.nodes_visited, len(gens))

    kwargs = {} if cap is None else {"cap": cap}
    group = PermGroup(g.n, [tuple(int(v) for v in p) for p in reversed(gens)], **kwargs)
    group.search_order = math.prod(orbit_sizes)
    group.graph = g
    return group
