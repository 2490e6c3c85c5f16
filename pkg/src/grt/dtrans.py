"""Intersection arrays, cosine vectors and sequences, and the cosine obstruction.

For a distance-regular graph, a neighbour ``k`` of ``j`` with
``dist(i, j) = delta`` lies at distance ``delta - 1``, ``delta`` or
``delta + 1`` from ``i``; the three counts ``c, a, b`` depend only on
``delta``. The cosine sequence of a theta-balanced realization normalized to
radius 1 then satisfies the three-term recurrence

    u_{delta+1} = ((theta - a_delta) u_delta - c_delta u_{delta-1}) / b_delta

with ``u_0 = 1`` and ``u_1 = theta / deg``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from grt.errors import NotDistanceRegularError, PreconditionError
from grt.graph import distances

GROUPING_TOL = 1e-8
RATIONAL_TOL = 1e-9
MAX_DENOMINATOR = 64


@dataclass(frozen=True)
class IntersectionArray:
    """``c = (c_1..c_D)``, ``a = (a_0..a_D)``, ``b = (b_0..b_{D-1})``."""

    diam: int
    deg: int
    a: tuple
    b: tuple
    c: tuple

    def __post_init__(self):
        for delta in range(self.diam + 1):
            total = self.c_at(delta) + self.a[delta] + self.b_at(delta)
            if total != self.deg:
                raise PreconditionError(f"counts at distance {delta} sum to {total}, not {self.deg}")

    def c_at(self, delta):
        return 0 if delta == 0 else self.c[delta - 1]

    def b_at(self, delta):
        return 0 if delta == self.diam else self.b[delta]

    def symbol(self):
        """The usual ``{b_0, ..., b_{D-1}; c_1, ..., c_D}`` notation."""
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"

    def to_dict(self):
        return {"diam": self.diam, "a": list(self.a), "b": list(self.b), "c": list(self.c)}

    def to_json(self):
        return json.dumps(self.to_dict())


def intersection_array(g):
    """Intersection array of a connected distance-regular graph.

    Every ordered pair at every distance is counted; the first pair whose
    counts differ from an earlier pair at the same distance is reported in a
    :class:`NotDistanceRegularError`. A connected non-regular graph always
    fails at distance 1 (the two ends of some edge have different degrees).
    """
    table = distances(g)
    if not table.connected:
        raise PreconditionError("intersection arrays need a connected graph")
    if g.n == 1:
        return IntersectionArray(0, 0, (0,), (), ())
    dist = table.dist
    adj = g.adjacency.astype(bool)
    diam = table.diam
    a, b, c = [0], [], []
    for delta in range(1, diam + 1):
        seen = None
        for i, j in table.pairs(delta):
            nb = dist[i, adj[j]]
            counts = (int(np.sum(nb == delta - 1)), int(np.sum(nb == delta)), int(np.sum(nb == delta + 1)))
            if seen is None:
                seen = counts
            elif counts != seen:
                raise NotDistanceRegularError(
                    f"pair {(i, j)} at distance {delta} has (c, a, b) = {counts}, expected {seen}",
                    pair=(i, j), delta=delta,
                )
        c.append(seen[0])
        a.append(seen[1])
        if delta < diam:
            b.append(seen[2])
    deg = int(g.degrees[0])
    return IntersectionArray(diam, deg, tuple(a), (deg, *b), tuple(c))


def cosine_sequence_recurrence(arr, theta):
    """``u_0..u_D`` for radius 1 from the three-term recurrence."""
    if arr.deg == 0:
        return np.ones(1)
    u = [1.0, theta / arr.deg][: arr.diam + 1]
    for delta in range(1, arr.diam):
        bd = arr.b_at(delta)
        if bd == 0:
            raise PreconditionError(f"b_{delta} = 0")
        u.append(((theta - arr.a[delta]) * u[delta] - arr.c_at(delta) * u[delta - 1]) / bd)
    return np.array(u)


@dataclass(frozen=True)
class CosineProfile:
    """Cosine vector ``u_j = <v_base, v_j>``, with its distance grouping if exact."""

    vector: np.ndarray
    sequence: np.ndarray | None
    base: int
    neighbors: tuple

    @property
    def radius2(self):
        return float(self.vector[self.base])

    def multiset(self, decimals=9):
        """Sorted ``(value, count)`` pairs, largest value first."""
        values, counts = np.unique(np.round(self.vector, decimals) + 0.0, return_counts=True)
        return [(float(v), int(k)) for v, k in zip(values[::-1], counts[::-1])]

    def to_dict(self):
        return {
            "base": self.base,
            "vector": self.vector.tolist(),
            "sequence": None if self.sequence is None else self.sequence.tolist(),
            "multiset": [[v, k] for v, k in self.multiset()],
        }

    def to_json(self):
        return json.dumps(self.to_dict())


def cosine_profile(r, base=0, tol=GROUPING_TOL):
    """Cosine vector of ``r`` at ``base``.

    The caller is responsible for vertex-transitivity, which makes the
    profile independent of ``base`` up to relabeling. The sequence is
    attached only when the graph is connected and entries at equal distance
    from ``base`` agree within ``tol``.
    """
    if not 0 <= base < r.n:
        raise PreconditionError(f"base vertex {base} out of range")
    u = r.matrix @ r.matrix[base]
    table = distances(r.graph)
    sequence = None
    if table.connected:
        row = table.dist[base]
        seq = []
        for delta in range(table.diam + 1):
            shell = u[row == delta]
            if np.ptp(shell) > tol * max(1.0, abs(u[base])):
                seq = None
                break
            seq.append(float(shell.mean()))
        sequence = None if seq is None else np.array(seq)
    neighbors = tuple(int(j) for j in np.flatnonzero(r.graph.adjacency[base]))
    return CosineProfile(u, sequence, base, neighbors)


@dataclass(frozen=True)
class ObstructionResult:
    """``feasible`` with a witness vector, or infeasible with a separating direction.

    For an infeasible system ``certificate`` is a direction ``(p, q)`` such that
    ``p <u, w> + q sum(w)`` cannot reach its required value over the box.
    """

    feasible: bool
    witness: np.ndarray | None
    certificate: tuple | None
    exact: bool

    def to_dict(self):
        return {
            "feasible": self.feasible,
            "exact": self.exact,
            "witness": None if self.witness is None else self.witness.tolist(),
            "certificate": None if self.certificate is None else [str(x) for x in self.certificate],
        }


def _as_rationals(values):
    out = []
    for v in values:
        q = Fraction(float(v)).limit_denominator(MAX_DENOMINATOR)
        if abs(float(q) - v) > RATIONAL_TOL:
            return None
        out.append(q)
    return out


def _zonotope_separator(gens, target, tol):
    """A direction separating ``target`` from ``sum [-1, 1] g``, or None if inside.

    In the plane the facet normals of a zonotope are perpendicular to its
    generators; the generators themselves are added to handle flat cases.
    """
    dirs = [(-gy, gx) for gx, gy in gens] + list(gens) + [(1, 0), (0, 1)]
    for p, q in dirs:
        if p == 0 and q == 0:
            continue
        support = sum(abs(p * gx + q * gy) for gx, gy in gens)
        if abs(p * target[0] + q * target[1]) > support + tol:
            return (p, q)
    return None


def cosine_obstruction(profile, fixed_positions=None, sum_zero=True):
    """Decide whether a competing cosine vector ``w`` can exist.

    Constraints: ``<u, w> = 0``; ``sum(w) = 0`` when ``sum_zero``;
    ``w_i = u_i`` on ``fixed_positions`` (default: base and its neighbours);
    ``|w_i| <= r^2`` elsewhere. The system only involves two linear forms, so
    it is feasible iff the required pair of values lies in a planar
    zonotope; that membership test runs in exact rationals when every entry
    is a small-denominator rational.
    """
    u = np.asarray(profile.vector, dtype=float)
    n = u.shape[0]
    fixed = sorted(set((profile.base, *profile.neighbors) if fixed_positions is None else fixed_positions))
    if any(not 0 <= i < n for i in fixed):
        raise PreconditionError("fixed position out of range")
    r2 = float(u[profile.base])
    if np.any(np.abs(u[fixed]) > r2 + RATIONAL_TOL):
        raise PreconditionError("a fixed value exceeds r^2 in absolute value")
    free = [i for i in range(n) if i not in set(fixed)]

    rationals = _as_rationals(u)
    exact = rationals is not None
    vals = rationals if exact else list(u)
    bound = vals[profile.base]
    zero = Fraction(0) if exact else 0.0
    tol = 0 if exact else 1e-9 * max(1.0, r2) * n
    s1 = sum((vals[i] * vals[i] for i in fixed), zero)
    s2 = sum((vals[i] for i in fixed), zero)
    if sum_zero:
        gens = [(bound * vals[i], bound) for i in free]
        target = (-s1, -s2)
    else:
        gens = [(bound * vals[i], zero) for i in free]
        target = (-s1, zero)
    separator = _zonotope_separator(gens, target, tol)
    if separator is not None:
        return ObstructionResult(False, None, separator, exact)

    # feasible: produce an explicit witness by linear programming
    rows = [u[free]]
    rhs = [-float(s1)]
    if sum_zero:
        rows.append(np.ones(len(free)))
        rhs.append(-float(s2))
    res = linprog(np.zeros(len(free)), A_eq=np.array(rows), b_eq=np.array(rhs),
                  bounds=[(-r2, r2)] * len(free), method="highs")
    witness = u.copy()
    if res.status == 0:
        witness[free] = res.x
    else:
        witness = None
    return ObstructionResult(True, witness, None, exact)
