"""Realizations of graphs: arrangement matrices, spectral construction,
balancedness, symmetry (representation extraction) and irreducibility.

A realization places vertex ``i`` at row ``i`` of an ``n x d`` arrangement
matrix ``M``. Its arrangement space is the column span of ``M`` in ``R^n``.
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from grt._validation import check_matrix, check_tolerance
from grt.errors import CapExceededError, NotSymmetricError, PreconditionError
from grt.graph import Graph, catalog, catalog_coordinates, graph_to_dict
from grt.linalg import (
    DEFAULT_GROUP_TOL,
    DEFAULT_SUBSPACE_TOL,
    Relation,
    Subspace,
    graph_spectrum,
    null_space,
    numerical_rank,
    subspace_relation,
)
from grt.symmetry.group import DEFAULT_CAP, compose, identity, inverse
from grt.symmetry.orbits import orbits

logger = logging.getLogger(__name__)

RANK_TOL = 1e-8
BALANCE_TOL = 1e-8
SYMMETRY_TOL = 1e-6
SCALAR_TOL = 1e-6


class Realization:
    """Full-dimensional realization of ``graph`` with arrangement matrix ``matrix``.

    Zero rows are allowed (realizations need not be injective), but the
    matrix must have rank ``d``.
    """

    def __init__(self, graph, matrix):
        m = check_matrix(matrix, graph.n).copy()
        rank = numerical_rank(m, RANK_TOL)
        if m.shape[1] == 0 or rank < m.shape[1]:
            raise PreconditionError(f"arrangement matrix of shape {m.shape} has rank {rank}")
        m.flags.writeable = False
        self.graph = graph
        self.matrix = m

    def __repr__(self):
        return f"Realization({self.graph!r}, d={self.d})"

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def d(self):
        return self.matrix.shape[1]

    @cached_property
    def gram(self):
        """``M^T M``."""
        return self.matrix.T @ self.matrix

    @cached_property
    def arrangement_space(self):
        return Subspace.span(self.matrix)

    def with_matrix(self, matrix):
        return Realization(self.graph, matrix)

    def to_dict(self):
        return {"graph": graph_to_dict(self.graph), "d": self.d,
                "matrix": np.round(self.matrix, 15).tolist()}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        g = Graph.from_edges(obj["graph"]["n"], obj["graph"]["edges"])
        m = np.array(obj["matrix"], dtype=float).reshape(g.n, -1)
        if "d" in obj and m.shape[1] != obj["d"]:
            raise PreconditionError(f"matrix has {m.shape[1]} columns but d={obj['d']}")
        return cls(g, m)


def concatenate(*realizations):
    """Coordinate-wise concatenation ``v_i = (v_i^(1), ..., v_i^(m))``."""
    g = realizations[0].graph
    if any(r.graph != g for r in realizations):
        raise PreconditionError("realizations belong to different graphs")
    return Realization(g, np.hstack([r.matrix for r in realizations]))


def skeleton(name):
    """Polytope skeleton from stored catalog coordinates (see :mod:`grt.graph`)."""
    return Realization(catalog(name), catalog_coordinates(name))


# -- spectral and balanced ------------------------------------------------------


def spectral_realization(g, eigen_index, tol=DEFAULT_GROUP_TOL, spectrum=None):
    """The normalized theta-realization for the ``eigen_index``-th largest eigenvalue.

    Columns are an orthonormal basis of the eigenspace, so ``M^T M = I`` and
    ``d`` equals the multiplicity.
    """
    spec = graph_spectrum(g, tol) if spectrum is None else spectrum
    eig = spec.by_index(eigen_index)
    r = Realization(g, eig.basis)
    r.theta = eig.value
    return r


def rayleigh_theta(r):
    a = r.graph.adjacency
    m = r.matrix
    theta = float(np.trace(m.T @ a @ m) / np.trace(r.gram))
    return 0.0 if abs(theta) < 1e-12 else theta


def balance_residual(r, theta):
    am = r.graph.adjacency @ r.matrix
    return float(np.max(np.abs(am - theta * r.matrix)))


def is_balanced(r, tol=BALANCE_TOL):
    """Return theta if ``A M = theta M`` within ``tol * max|M|``, else None."""
    tol = check_tolerance(tol)
    theta = rayleigh_theta(r)
    scale = float(np.max(np.abs(r.matrix)))
    if balance_residual(r, theta) <= tol * scale:
        return theta
    return None


def is_spectral(r, tol=BALANCE_TOL, group_tol=DEFAULT_GROUP_TOL):
    """Return theta if ``r`` is theta-balanced and ``d`` equals the multiplicity of theta."""
    theta = is_balanced(r, tol)
    if theta is None:
        return None
    eig = graph_spectrum(r.graph, group_tol).find(theta, atol=max(group_tol, 1e-6))
    if eig is not None and eig.multiplicity == r.d:
        return theta
    return None


def normalize(r):
    """Equivalent realization with ``M^T M = I`` via ``M (M^T M)^{-1/2}``."""
    w, v = np.linalg.eigh(r.gram)
    inv_sqrt = (v / np.sqrt(w)) @ v.T
    return r.with_matrix(r.matrix @ inv_sqrt)


class SphericityKind(str, enum.Enum):
    NORMALIZED = "normalized"
    SPHERICAL = "spherical"
    NEITHER = "neither"


@dataclass(frozen=True)
class Sphericity:
    kind: SphericityKind
    alpha: float | None


def sphericity(r, tol=1e-8):
    """Classify ``M^T M`` as ``I`` (normalized), ``alpha I`` (spherical), or neither."""
    tol = check_tolerance(tol)
    alpha = float(np.trace(r.gram) / r.d)
    if np.max(np.abs(r.gram - alpha * np.eye(r.d))) > tol * alpha:
        return Sphericity(SphericityKind.NEITHER, None)
    if abs(alpha - 1) <= tol:
        return Sphericity(SphericityKind.NORMALIZED, 1.0)
    return Sphericity(SphericityKind.SPHERICAL, alpha)


def orthogonal_relation(r1, r2):
    """Least-squares ``T`` with ``M1 ~ M2 T^T`` (exact for equivalent normalized inputs)."""
    t_transpose, *_ = np.linalg.lstsq(r2.matrix, r1.matrix, rcond=None)
    return t_transpose.T


def equivalent(r1, r2, tol=DEFAULT_SUBSPACE_TOL):
    """True iff the arrangement spaces coincide.

    For two normalized inputs the orthogonal ``T`` with ``M1 = M2 T^T`` is
    recovered and checked as well.
    """
    tol = check_tolerance(tol)
    if r1.graph != r2.graph:
        raise PreconditionError("realizations belong to different graphs")
    if r1.d != r2.d:
        return False
    if subspace_relation(r1.arrangement_space, r2.arrangement_space, tol) != Relation.EQUAL:
        return False
    normalized = SphericityKind.NORMALIZED
    if sphericity(r1, tol).kind == normalized and sphericity(r2, tol).kind == normalized:
        t = orthogonal_relation(r1, r2)
        if np.max(np.abs(t.T @ t - np.eye(r1.d))) > tol * 10:
            return False
        return bool(np.max(np.abs(r1.matrix - r2.matrix @ t.T)) <= tol * 10)
    return True


def eigenvector_from_realization(r, x):
    """``u = M x``; a theta-eigenvector whenever ``r`` is theta-balanced."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != r.d:
        raise PreconditionError(f"x has length {x.shape[0]}, expected {r.d}")
    return r.matrix @ x


# -- symmetry -------------------------------------------------------------------


@dataclass(frozen=True)
class Representation:
    """Orthogonal matrices ``T_sigma`` for the generators of ``group`` (same order)."""

    group: object
    matrices: tuple

    @property
    def d(self):
        return self.matrices[0].shape[0] if self.matrices else 0

    def images(self, cap=DEFAULT_CAP):
        """``{perm: T_perm}`` for every group element, built by closure over generators."""
        if self.group.order > cap:
            raise CapExceededError(f"group order {self.group.order} exceeds cap {cap}")
        d = self.d
        start = identity(self.group.n)
        out = {start: np.eye(d)}
        queue = [start]
        for p in queue:
            tp = out[p]
            for g, tg in zip(self.group.generators, self.matrices):
                q = compose(g, p)
                if q not in out:
                    out[q] = tg @ tp
                    queue.append(q)
        return out

    def word_image(self, word):
        """``T`` of the product ``g_{w[0]} g_{w[1]} ...`` (generator indices)."""
        t = np.eye(self.d)
        for k in word:
            t = t @ self.matrices[k]
        return t


def intertwiner(r, perm):
    """Least-squares ``T`` with ``T v_i ~ v_perm(i)``, i.e. ``M T^T ~ M[perm]``."""
    t_transpose, *_ = np.linalg.lstsq(r.matrix, r.matrix[np.asarray(perm)], rcond=None)
    return t_transpose.T


def _symmetry_defect(r, perm, t):
    residual = float(np.max(np.abs(r.matrix[np.asarray(perm)] - r.matrix @ t.T)))
    ortho = float(np.max(np.abs(t.T @ t - np.eye(r.d))))
    return residual, ortho


def extract_representation(r, group, tol=SYMMETRY_TOL):
    """Recover ``T_sigma`` for each generator, or raise :class:`NotSymmetricError`.

    Solves ``M T^T = Pi_sigma M`` by least squares and then verifies that
    ``T`` is orthogonal and the residual is below ``tol`` (relative to
    ``max(1, max|M|)``). Products of generator pairs are rechecked against
    ``T_sigma T_rho``.
    """
    scale = max(1.0, float(np.max(np.abs(r.matrix))))
    mats = []
    for k, g in enumerate(group.generators):
        t = intertwiner(r, g)
        residual, ortho = _symmetry_defect(r, g, t)
        if residual > tol * scale or ortho > tol:
            raise NotSymmetricError(
                f"generator {k} is not realized orthogonally "
                f"(residual {residual:.3g}, orthogonality defect {ortho:.3g})",
                generator=k, residual=max(residual, ortho),
            )
        mats.append(t)
    gens = group.generators
    for a in range(len(gens)):
        for b in range(len(gens)):
            direct = intertwiner(r, compose(gens[a], gens[b]))
            if np.max(np.abs(direct - mats[a] @ mats[b])) > tol * 10:
                raise NotSymmetricError("representation is not multiplicative", generator=a)
    return Representation(group, tuple(mats))


def max_symmetry_residual(r, group):
    """Largest intertwining residual over the generators (no orthogonality check)."""
    worst = 0.0
    for g in group.generators:
        residual, _ = _symmetry_defect(r, g, intertwiner(r, g))
        worst = max(worst, residual)
    return worst


def is_symmetric(r, group, tol=SYMMETRY_TOL):
    try:
        extract_representation(r, group, tol)
    except NotSymmetricError:
        return False
    return True


# -- irreducibility -----------------------------------------------------------------


def _commutant_basis(rep):
    d = rep.d
    eye = np.eye(d)
    # vec(T S - S T) = (I (x) T - T^T (x) I) vec(S), column-major vec
    blocks = [np.kron(eye, t) - np.kron(t.T, eye) for t in rep.matrices]
    if not blocks:
        return np.eye(d * d)
    return null_space(np.vstack(blocks), rtol=1e-9)


def reynolds(rep, s0, method="auto", cap=DEFAULT_CAP, _cache=None):
    """Group average ``(1/|G|) sum T S0 T^T``.

    ``method="enumerate"`` sums over all elements; ``"commutant"`` projects
    ``S0`` orthogonally onto the commutant of the generators, which is the same
    operator and needs no enumeration. ``"auto"`` enumerates up to ``cap``.
    """
    if method == "auto":
        method = "enumerate" if rep.group.order <= cap else "commutant"
    if method == "enumerate":
        images = rep.images(cap) if _cache is None else _cache
        total = np.zeros_like(s0)
        for t in images.values():
            total += t @ s0 @ t.T
        return total / len(images)
    if method == "commutant":
        basis = _commutant_basis(rep)
        vec = s0.reshape(-1, order="F")
        return (basis @ (basis.T @ vec)).reshape(s0.shape, order="F")
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class IrreducibilityResult:
    irreducible: bool
    witness: np.ndarray | None  # d x k orthonormal basis of a proper invariant subspace
    method: str

    def __bool__(self):
        return self.irreducible


def _split_witness(s):
    w, v = np.linalg.eigh(s)
    gaps = np.diff(w)
    cut = int(np.argmax(gaps)) + 1
    return v[:, cut:]


def irreducibility_test(r, group, samples=3, seed=0, rep=None, method="auto", tol=SCALAR_TOL):
    """Reynolds test: averaged random symmetric matrices are scalar iff irreducible.

    On a reducible input the witness is a union of eigenspaces of a
    non-scalar commuting matrix, hence a proper invariant subspace of
    ``R^d``.
    """
    rep = extract_representation(r, group) if rep is None else rep
    d = r.d
    if method == "auto":
        method = "enumerate" if group.order <= DEFAULT_CAP else "commutant"
    cache = rep.images() if method == "enumerate" else None
    rng = np.random.default_rng(seed)
    for _ in range(max(1, samples)):
        s0 = rng.standard_normal((d, d))
        s0 = (s0 + s0.T) / 2
        s = reynolds(rep, s0, method, _cache=cache)
        s = (s + s.T) / 2
        scale = float(np.max(np.abs(s)))
        if np.max(np.abs(s - np.trace(s) / d * np.eye(d))) > tol * scale:
            return IrreducibilityResult(False, _split_witness(s), method)
    return IrreducibilityResult(True, None, method)


def irreducible_components(r, group, seed=0, samples=3):
    """Split ``r`` into irreducible components ``M W_k`` along invariant subspaces ``W_k``.

    The ``W_k`` are mutually orthogonal, so concatenating the components gives
    ``M [W_1 ... W_m]``, an equivalent realization.
    """
    rep = extract_representation(r, group)

    def split(basis):
        sub = r.with_matrix(r.matrix @ basis)
        sub_rep = Representation(group, tuple(basis.T @ t @ basis for t in rep.matrices))
        res = irreducibility_test(sub, group, samples=samples, seed=seed, rep=sub_rep)
        if res.irreducible:
            return [basis]
        w = res.witness
        rest = null_space(w.T) if w.shape[1] < w.shape[0] else np.zeros((w.shape[0], 0))
        return split(basis @ w) + split(basis @ rest)

    return [r.with_matrix(r.matrix @ b) for b in split(np.eye(r.d))]


def build_from_representation(group, rep, seed_point, base_vertex=0, graph=None, tol=1e-8):
    """Realization ``v_i = T_{sigma_i} seed_point`` with ``sigma_i(base_vertex) = i``.

    ``graph`` defaults to ``group.graph`` (set by :func:`automorphism_group`).

    The coset representatives come from a Schreier tree over the generators.
    Every Schreier generator fixes ``base_vertex``; its matrix must fix the
    seed point, which checks feasibility and well-definedness at once.
    """
    seed = np.asarray(seed_point, dtype=float).reshape(-1)
    if seed.shape[0] != rep.d:
        raise PreconditionError(f"seed point has length {seed.shape[0]}, expected {rep.d}")
    n = group.n
    reps = {base_vertex: (identity(n), np.eye(rep.d))}
    queue = [base_vertex]
    for i in queue:
        u, tu = reps[i]
        for g, tg in zip(group.generators, rep.matrices):
            j = g[i]
            if j not in reps:
                reps[j] = (compose(g, u), tg @ tu)
                queue.append(j)
    if len(reps) != n:
        raise PreconditionError("group is not vertex-transitive")
    scale = max(1.0, float(np.linalg.norm(seed)))
    for i, (u, tu) in reps.items():
        for g, tg in zip(group.generators, rep.matrices):
            v, tv = reps[g[i]]
            schreier = compose(inverse(v), compose(g, u))
            assert schreier[base_vertex] == base_vertex
            t_s = tv.T @ tg @ tu
            if np.linalg.norm(t_s @ seed - seed) > tol * scale:
                raise PreconditionError("seed point is not fixed by the stabilizer of the base vertex")
    graph = getattr(group, "graph", None) if graph is None else graph
    if graph is None:
        raise PreconditionError("no graph given and the group carries none")
    matrix = np.array([reps[i][1] @ seed for i in range(n)])
    return Realization(graph, matrix)


def scale_orbits(r, group, alphas):
    """Rescale each vertex orbit ``k`` (orbits listed by smallest vertex) by ``alphas[k]``."""
    parts = orbits(group, "vertices")
    alphas = [float(a) for a in alphas]
    if len(alphas) != len(parts):
        raise PreconditionError(f"need {len(parts)} scale factors, got {len(alphas)}")
    if not any(alphas):
        raise PreconditionError("all scale factors are zero")
    factors = np.empty(r.n)
    for part, a in zip(parts, alphas):
        factors[part] = a
    return r.with_matrix(r.matrix * factors[:, None])
