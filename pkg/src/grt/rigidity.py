"""Rigidity and flexibility diagnostics for symmetric realizations.

A symmetric realization is rigid if it cannot be deformed, within the
realizations of the same group, into a non-equivalent one. The report runs a
cascade of sufficient conditions and answers ``inconclusive`` when none
applies; no rule is used in the converse direction.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from grt.errors import CapExceededError
from grt.linalg import graph_spectrum, numerical_rank
from grt.realization import (
    Realization,
    extract_representation,
    intertwiner,
    irreducibility_test,
    is_balanced,
)
from grt.symmetry import orbits, transitivity_class

LOCAL_RANK_TOL = 1e-8
FIX_TOL = 1e-6
HIT_TOL = 1e-6


class Verdict(str, enum.Enum):
    RIGID = "rigid_certified"
    FLEXIBLE = "flexible_certified"
    INCONCLUSIVE = "inconclusive"


def full_local_dimension(r):
    """True iff at every vertex the edge directions ``v_j - v_i`` span ``R^d``."""
    m = r.matrix
    for i in range(r.n):
        nbrs = r.graph.neighbors(i)
        if len(nbrs) < r.d:
            return False
        if numerical_rank(m[list(nbrs)] - m[i], LOCAL_RANK_TOL) < r.d:
            return False
    return True


def fix_dimension(r, group, base=0):
    """Dimension of the subspace fixed by every ``T_sigma`` with ``sigma(base) = base``."""
    stab = group.stabilizer(base)
    if not stab.generators:
        return r.d
    eye = np.eye(r.d)
    stacked = np.vstack([intertwiner(r, s) - eye for s in stab.generators])
    s = np.linalg.svd(stacked, compute_uv=False)
    return r.d - int(np.sum(s > FIX_TOL))


def eigenspace_projections(r, spectrum=None):
    """``(theta, ||B_theta^T Q||_F)`` per eigenvalue, ``Q`` an orthonormal basis of ``U``.

    The squared norms sum to ``d``.
    """
    spectrum = graph_spectrum(r.graph) if spectrum is None else spectrum
    q = r.arrangement_space.basis
    return [(e.value, float(np.linalg.norm(e.basis.T @ q))) for e in spectrum.eigs]


def nonzero_hits(projections, d):
    return [(theta, norm) for theta, norm in projections if norm > HIT_TOL * np.sqrt(d)]


@dataclass(frozen=True)
class MultiplicityCriteria:
    balanced_forced: bool
    rigid_forced: bool


def multiplicity_criteria(spectrum, d):
    """Consequences for irreducible ``d``-dimensional realizations.

    With ``mu_1`` the largest multiplicity (attained once) and ``mu_2`` the
    next one: ``mu_2 < d`` forces balance, and additionally ``mu_1 < 2d``
    forces rigidity.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    mults = sorted(spectrum.multiplicities, reverse=True)
    mu1 = mults[0]
    mu2 = mults[1] if len(mults) > 1 else 0
    balanced = mu1 != mu2 and mu2 < d
    return MultiplicityCriteria(balanced, balanced and mu1 < 2 * d)


@dataclass(frozen=True)
class RigidityReport:
    full_local_dimension: bool
    fix_dim: int | None
    eigenspace_hits: list
    verdict: Verdict
    rule: str | None
    balanced_forced: bool
    rigid_forced: bool
    irreducible: bool | None
    evidence: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "rule": self.rule,
            "full_local_dimension": self.full_local_dimension,
            "fix_dim": self.fix_dim,
            "irreducible": self.irreducible,
            "balanced_forced": self.balanced_forced,
            "rigid_forced": self.rigid_forced,
            "eigenspace_hits": [[theta, norm] for theta, norm in self.eigenspace_hits],
            "evidence": self.evidence,
        }

    def to_json(self):
        return json.dumps(self.to_dict())


RULES = {
    "a": "distance-transitive group",
    "b": "arc-transitive and full local dimension",
    "c": "vertex-transitive and the stabilizer fixes a 1-dimensional subspace",
    "d": "irreducible with at least two non-zero vertex orbits",
    "e": "irreducible and meets at least two eigenspaces",
}


def rigidity_report(r, g=None, group=None, seed=0):
    """Run the rule cascade (a)-(e) on a symmetric realization.

    Raises :class:`NotSymmetricError` when ``r`` does not realize ``group``.
    Rule (b) is only reported after irreducibility and balance have been
    re-checked numerically.
    """
    from grt.symmetry import automorphism_group

    g = r.graph if g is None else g
    if not isinstance(r, Realization) or g != r.graph:
        raise ValueError("realization belongs to a different graph")
    group = automorphism_group(g) if group is None else group
    extract_representation(r, group)

    spectrum = graph_spectrum(g)
    trans = transitivity_class(g, group)
    local = full_local_dimension(r)
    try:
        fix_dim = fix_dimension(r, group)
    except CapExceededError:
        fix_dim = None
    projections = eigenspace_projections(r, spectrum)
    hits = nonzero_hits(projections, r.d)
    try:
        irreducible = irreducibility_test(r, group, seed=seed).irreducible
    except CapExceededError:
        irreducible = None
    theta = is_balanced(r)
    crit = multiplicity_criteria(spectrum, r.d)
    norms = np.linalg.norm(r.matrix, axis=1)
    scale = float(norms.max())
    vertex_orbits = orbits(group, "vertices")
    nonzero_orbits = sum(1 for orb in vertex_orbits if norms[orb].max() > 1e-9 * scale)
    evidence = {
        "transitivity": trans.to_dict(),
        "balanced_theta": theta,
        "vertex_orbits": len(vertex_orbits),
        "nonzero_vertex_orbits": nonzero_orbits,
        "eigenspace_hits": len(hits),
        "group_order": group.order,
    }

    verdict, rule = Verdict.INCONCLUSIVE, None
    if trans.distance:
        verdict, rule = Verdict.RIGID, "a"
    elif trans.arc and local:
        evidence["rule_b_check"] = {"irreducible": irreducible, "balanced": theta is not None}
        if irreducible and theta is not None:
            verdict, rule = Verdict.RIGID, "b"
    # the Fix criterion needs a vertex-transitive group; with several orbits
    # each can be rescaled independently even when Fix is a line
    if rule is None and trans.vertex and fix_dim == 1:
        verdict, rule = Verdict.RIGID, "c"
    if rule is None and irreducible and not trans.vertex and nonzero_orbits >= 2:
        verdict, rule = Verdict.FLEXIBLE, "d"
    if rule is None and irreducible and len(hits) >= 2:
        verdict, rule = Verdict.FLEXIBLE, "e"
    if rule is not None:
        evidence["rule_description"] = RULES[rule]

    return RigidityReport(
        full_local_dimension=local,
        fix_dim=fix_dim,
        eigenspace_hits=hits,
        verdict=verdict,
        rule=rule,
        balanced_forced=crit.balanced_forced,
        rigid_forced=crit.rigid_forced,
        irreducible=irreducible,
        evidence=evidence,
    )
