"""Metric quantities of balanced, vertex- and edge-transitive realizations.

For such a realization every vertex has the same norm ``r`` and every edge
the same inner product ``omega``; balancing then fixes the cosine
``omega / r^2 = theta / deg`` and the relative edge length
``(l / r)^2 = 2 lambda / deg`` with ``lambda = deg - theta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from grt.errors import PreconditionError
from grt.realization import SphericityKind, extract_representation, is_balanced, sphericity

SPREAD_TOL = 1e-8


def radius(r):
    """Root mean square vertex norm ``sqrt(tr(M^T M) / n)``."""
    return math.sqrt(float(np.trace(r.gram)) / r.n)


def relative_length(deg, theta):
    """``l / r`` of a theta-balanced edge- and vertex-transitive realization."""
    if deg <= 0:
        raise PreconditionError("degree must be positive")
    value = 2 * (deg - theta) / deg
    if value < -1e-12:
        raise PreconditionError(f"theta={theta} exceeds the degree {deg}")
    return math.sqrt(max(value, 0.0))


def theta_from_metrics(deg, rel_length):
    """``deg * (1 - (l / r)^2 / 2)``."""
    if deg <= 0:
        raise PreconditionError("degree must be positive")
    if rel_length < 0:
        raise PreconditionError("relative length must be non-negative")
    return deg * (1 - 0.5 * rel_length**2)


def circumradius_at_unit_edge(g, theta):
    """Circumradius ``sqrt(deg / (2 (deg - theta)))`` once edges have unit length."""
    deg = g.degree
    lam = deg - theta
    if lam <= 0:
        raise PreconditionError(f"theta={theta} must be below the degree {deg}")
    return math.sqrt(deg / (2 * lam))


def dihedral_angle_from_dual(g_dual, theta, degrees=False):
    """``pi - arccos(theta / deg)`` for the edge graph of the dual polytope.

    Radians by default; pass ``degrees=True`` for degrees.
    """
    c = theta / g_dual.degree
    if not -1 - 1e-12 <= c <= 1 + 1e-12:
        raise PreconditionError(f"cosine {c} lies outside [-1, 1]")
    angle = math.pi - math.acos(min(1.0, max(-1.0, c)))
    return math.degrees(angle) if degrees else angle


@dataclass(frozen=True)
class MetricReport:
    radius: float
    omega: float
    length: float
    cosine: float
    relative_length: float
    theta: float
    lam: float
    degree: int

    def to_dict(self):
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_text(self):
        rows = self.to_dict()
        width = max(map(len, rows))
        return "\n".join(f"{k:<{width}}  {v:.12g}" for k, v in rows.items()) + "\n"


def metric_report(r, g=None, group=None, tol=1e-8):
    """Radius, edge inner product, edge length and derived quantities.

    Checks its own preconditions: ``group`` (default ``Aut(g)``) must act
    transitively on vertices and edges and be realized by ``r``, and ``r``
    must be balanced. Direct row computations are cross-checked against the
    closed forms.
    """
    from grt.symmetry import automorphism_group, orbits

    g = r.graph if g is None else g
    if g != r.graph:
        raise PreconditionError("realization belongs to a different graph")
    if g.num_edges == 0:
        raise PreconditionError("graph has no edges")
    group = automorphism_group(g) if group is None else group
    if len(orbits(group, "vertices")) != 1:
        raise PreconditionError("group is not vertex-transitive")
    if len(orbits(group, "edges", g)) != 1:
        raise PreconditionError("group is not edge-transitive; the edge inner product is not defined")
    extract_representation(r, group)
    theta = is_balanced(r, tol)
    if theta is None:
        raise PreconditionError("realization is not balanced")

    m = r.matrix
    edges = np.array(g.edge_list)
    inner = np.einsum("ij,ij->i", m[edges[:, 0]], m[edges[:, 1]])
    norms2 = np.einsum("ij,ij->i", m, m)
    scale = float(norms2.max())
    if np.ptp(inner) > SPREAD_TOL * scale or np.ptp(norms2) > SPREAD_TOL * scale:
        raise PreconditionError("edge inner products or vertex norms are not constant")
    deg = g.degree
    rad = radius(r)
    omega = float(inner.mean())
    length = math.sqrt(max(0.0, 2 * (rad**2 - omega)))
    cosine = omega / rad**2
    if abs(cosine - theta / deg) > 1e-6:
        raise PreconditionError(f"cosine {cosine} disagrees with theta/deg = {theta / deg}")
    lam = deg - theta
    if sphericity(r).kind == SphericityKind.NORMALIZED:
        # lengths are compared squared; the square root amplifies rounding near 0
        omega0 = closed_form_omega(theta, r.d, g.num_edges)
        length0 = closed_form_length(lam, r.d, g.num_edges)
        if abs(omega - omega0) > tol or abs(length**2 - length0**2) > tol:
            raise PreconditionError("edge metrics disagree with the closed forms")
    return MetricReport(
        radius=rad,
        omega=omega,
        length=length,
        cosine=cosine,
        relative_length=length / rad,
        theta=theta,
        lam=lam,
        degree=deg,
    )


def closed_form_omega(theta, d, num_edges):
    """Edge inner product ``theta d / (2|E|)`` of a normalized realization."""
    return theta * d / (2 * num_edges)


def closed_form_length(lam, d, num_edges):
    """Edge length ``sqrt(lambda d / |E|)`` of a normalized realization."""
    if lam < -1e-12:
        raise PreconditionError(f"lambda={lam} must be non-negative")
    return math.sqrt(max(lam, 0.0) * d / num_edges)
