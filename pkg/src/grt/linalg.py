"""Symmetric eigendecomposition with eigenvalue grouping, and subspace algebra."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from grt._validation import check_symmetric, check_tolerance
from grt.errors import PreconditionError

DEFAULT_GROUP_TOL = 1e-5
DEFAULT_SUBSPACE_TOL = 1e-7


class ConvergenceError(RuntimeError):
    pass


def orthonormalize(vectors, rtol=1e-10):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Columns whose residual falls below ``rtol`` times their original norm are
    dropped, so the result spans the same space as the accepted columns.
    """
    vectors = np.array(vectors, dtype=float)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    basis = []
    for k in range(vectors.shape[1]):
        v = vectors[:, k].copy()
        norm0 = np.linalg.norm(v)
        if norm0 == 0:
            continue
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm > rtol * norm0:
            basis.append(v / norm)
    if not basis:
        return np.zeros((vectors.shape[0], 0))
    return np.column_stack(basis)


def _canonical_basis(block):
    """Label-independent orthonormal basis of ``span(block)``.

    Walks the columns of the orthogonal projector in vertex order and keeps
    each one that adds a new direction; the projector does not depend on the
    rotation the eigensolver picked inside a multiple eigenvalue.
    """
    m = block.shape[1]
    proj = block @ block.T
    basis = []
    for j in range(proj.shape[0]):
        v = proj[:, j].copy()
        norm0 = np.linalg.norm(v)
        if norm0 < 1e-8:
            continue
        for _ in range(2):
            for q in basis:
                v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm > 1e-3 * norm0:
            basis.append(v / norm)
            if len(basis) == m:
                break
    if len(basis) < m:
        return orthonormalize(block)
    return np.column_stack(basis)


def jacobi_eigh(matrix, max_sweeps=100, tol=1e-14):
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Returns ``(values, vectors)`` sorted by value descending. Deterministic
    row-by-row sweep order; raises :class:`ConvergenceError` after
    ``max_sweeps`` sweeps.
    """
    a = check_symmetric(matrix).copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.max(np.abs(a)), 1e-300) if n else 1.0
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale * n:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                tau = (a[q, q] - a[p, p]) / (2 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


@dataclass(frozen=True)
class Eigenspace:
    value: float
    multiplicity: int
    basis: np.ndarray


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues grouped by tolerance, largest first, with orthonormal bases."""

    eigs: tuple
    tol: float

    def __len__(self):
        return len(self.eigs)

    def __iter__(self):
        return iter(self.eigs)

    def __getitem__(self, k):
        return self.eigs[k]

    @property
    def values(self):
        return np.array([e.value for e in self.eigs])

    @property
    def multiplicities(self):
        return [e.multiplicity for e in self.eigs]

    @property
    def n(self):
        return sum(self.multiplicities)

    def by_index(self, index):
        """Eigenspace for a 1-based index (1 = largest eigenvalue)."""
        if not 1 <= index <= len(self.eigs):
            raise PreconditionError(f"eigen index {index} out of range 1..{len(self.eigs)}")
        return self.eigs[index - 1]

    def find(self, theta, atol=None):
        """The eigenspace whose value is within ``atol`` of ``theta``, else None."""
        atol = self.tol if atol is None else atol
        best = min(self.eigs, key=lambda e: abs(e.value - theta), default=None)
        if best is not None and abs(best.value - theta) <= atol:
            return best
        return None

    def to_csv(self):
        lines = ["theta,multiplicity"]
        lines += [f"{e.value:.12g},{e.multiplicity}" for e in self.eigs]
        return "\n".join(lines) + "\n"

    def to_dict(self, with_basis=True):
        out = {"tol": self.tol, "eigs": []}
        for e in self.eigs:
            item = {"theta": float(e.value), "multiplicity": e.multiplicity}
            if with_basis:
                item["basis"] = np.round(e.basis, 15).tolist()
            out["eigs"].append(item)
        return out

    def to_json(self, with_basis=True):
        return json.dumps(self.to_dict(with_basis))


def eigendecompose(matrix, tol=DEFAULT_GROUP_TOL, method="lapack"):
    """Full eigendecomposition of a symmetric matrix, eigenvalues grouped by ``tol``.

    Sorted eigenvalues are chained into one group while consecutive gaps stay
    ``<= tol``; a group's value is the mean of its members. ``method`` is
    ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"`` (:func:`jacobi_eigh`).
    """
    tol = check_tolerance(tol)
    a = check_symmetric(matrix)
    a = (a + a.T) / 2
    n = a.shape[0]
    if n == 1:
        return Spectrum((Eigenspace(float(a[0, 0]), 1, np.ones((1, 1))),), tol)
    if method == "lapack":
        values, vectors = np.linalg.eigh(a)
        values, vectors = values[::-1], vectors[:, ::-1]
    elif method == "jacobi":
        values, vectors = jacobi_eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")

    groups = [[0]]
    for k in range(1, n):
        if values[groups[-1][-1]] - values[k] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    eigs = []
    for idx in groups:
        basis = _canonical_basis(vectors[:, idx])
        basis.flags.writeable = False
        value = float(np.mean(values[idx]))
        if abs(value) < 1e-12:
            value = 0.0
        eigs.append(Eigenspace(value, len(idx), basis))
    return Spectrum(tuple(eigs), tol)


def graph_spectrum(g, tol=DEFAULT_GROUP_TOL):
    return eigendecompose(g.adjacency, tol)


def laplacian_eigenvalue(g, theta):
    """Laplacian eigenvalue ``deg(G) - theta`` of a regular graph."""
    return g.degree - theta


@dataclass(frozen=True)
class Subspace:
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim == 1:
            b = b[:, None]
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors):
        """Orthonormal basis of the column span of ``vectors``."""
        vectors = np.asarray(vectors, dtype=float)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        if vectors.shape[1] == 0:
            return cls(np.zeros((vectors.shape[0], 0)))
        u, s, _ = np.linalg.svd(vectors, full_matrices=False)
        rank = int(np.sum(s > 1e-10 * max(s[0], 1e-300))) if s.size and s[0] > 0 else 0
        return cls(_canonical_basis(u[:, :rank]) if rank else np.zeros((vectors.shape[0], 0)))

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def ambient(self):
        return self.basis.shape[0]

    def projector(self):
        return self.basis @ self.basis.T


def project(u, x):
    """Orthogonal projection of ``x`` (vector or column block) onto ``u``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != u.ambient:
        raise ValueError(f"dimension mismatch: subspace in R^{u.ambient}, vector in R^{x.shape[0]}")
    return u.basis @ (u.basis.T @ x)


class Relation(str, enum.Enum):
    EQUAL = "equal"
    CONTAINED = "contained"
    ORTHOGONAL = "orthogonal"
    NON_ORTHOGONAL = "non-orthogonal"
    INCOMPARABLE = "incomparable"


def principal_cosines(u1, u2):
    """Cosines of the principal angles between two subspaces, descending."""
    if u1.ambient != u2.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    if u1.dim == 0 or u2.dim == 0:
        return np.zeros(0)
    return np.clip(np.linalg.svd(u1.basis.T @ u2.basis, compute_uv=False), 0.0, 1.0)


def _inside(u1, u2, tol):
    # every basis vector of u1 has (numerically) no component outside u2
    if u1.dim > u2.dim:
        return False
    if u1.dim == 0:
        return True
    residual = u1.basis - project(u2, u1.basis)
    return float(np.max(np.linalg.norm(residual, axis=0))) <= tol


def subspace_relation(u1, u2, tol=DEFAULT_SUBSPACE_TOL):
    """Classify how ``u1`` sits relative to ``u2``.

    ``equal``: same space. ``contained``: ``u1`` is a proper subspace of
    ``u2``. ``orthogonal``: all cross inner products ``<= tol``.
    ``non-orthogonal``: not orthogonal and ``u2`` is a proper subspace of
    ``u1``. ``incomparable``: not orthogonal and neither space contains the
    other.
    """
    if u1.ambient != u2.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    a_in_b = _inside(u1, u2, tol)
    b_in_a = _inside(u2, u1, tol)
    if a_in_b and b_in_a:
        return Relation.EQUAL
    if a_in_b:
        return Relation.CONTAINED
    cross = u1.basis.T @ u2.basis
    if cross.size == 0 or np.max(np.abs(cross)) <= tol:
        return Relation.ORTHOGONAL
    return Relation.NON_ORTHOGONAL if b_in_a else Relation.INCOMPARABLE


def null_space(matrix, rtol=1e-8):
    """Orthonormal basis of the numerical null space (relative singular threshold)."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    _, s, vt = np.linalg.svd(matrix, full_matrices=True)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rtol * scale))
    return vt[rank:].T


def numerical_rank(matrix, rtol=1e-8):
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))
