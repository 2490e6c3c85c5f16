"""Hand-built realizations used as worked examples and test witnesses."""

from __future__ import annotations

import numpy as np

from grt.errors import PreconditionError
from grt.graph import catalog
from grt.linalg import graph_spectrum, null_space
from grt.realization import Realization, Representation, extract_representation, spectral_realization
from grt.symmetry.group import PermGroup


def _c4_realization(points):
    return Realization(catalog("cycle", [4]), np.array(points, dtype=float))


def square_c4(side=1.0):
    h = side / 2
    return _c4_realization([[h, h], [-h, h], [-h, -h], [h, -h]])


def rectangle_c4(width=2.0, height=1.0):
    """Rectangle with vertices in cyclic order; side ratio ``width / height``."""
    w, h = width / 2, height / 2
    return _c4_realization([[w, h], [-w, h], [-w, -h], [w, -h]])


def rhombus_c4(a=2.0, b=1.0):
    """Rhombus with diagonals ``2a`` and ``2b`` along the coordinate axes."""
    return _c4_realization([[a, 0], [0, b], [-a, 0], [0, -b]])


def c4_diagonal_reflections():
    """The two reflections of C4 through its diagonals (a Klein four-group)."""
    return PermGroup(4, [(0, 3, 2, 1), (2, 1, 0, 3)])


def rotation_group(n):
    """Cyclic rotations of C_n, with the cycle graph attached."""
    group = PermGroup(n, [tuple((i + 1) % n for i in range(n))])
    group.graph = catalog("cycle", [n])
    return group


def rotation_representation(group, k=1):
    """``sigma -> R(2 pi k / n)`` on the single rotation generator."""
    t = 2 * np.pi * k / group.n
    c, s = np.cos(t), np.sin(t)
    return Representation(group, (np.array([[c, -s], [s, c]]),))


def hexagonal_prism_balanced():
    """Hexagon ``p_b`` on one n-gon, ``-p_b`` on the other; 0-balanced, 2-dimensional."""
    g = catalog("prism", [6])
    angles = np.pi * np.arange(6) / 3
    hexagon = np.column_stack([np.cos(angles), np.sin(angles)])
    return Realization(g, np.vstack([hexagon, -hexagon]))


def c6xc6_sign():
    """``(i, j) -> ((-1)^i, (-1)^j)`` on C6 x C6; 0-balanced, 2-dimensional."""
    g = catalog("torus", [6, 6])
    signs = (-1.0) ** np.arange(6)
    m = np.array([[signs[i], signs[j]] for i in range(6) for j in range(6)])
    return Realization(g, m)


def intertwiners(rep1, rep2, rtol=1e-9):
    """Basis of ``{Q : T1_g Q = Q T2_g for all generators g}`` as ``d1 x d2`` matrices."""
    d1, d2 = rep1.d, rep2.d
    eye1, eye2 = np.eye(d1), np.eye(d2)
    # vec(T1 Q - Q T2) = (I (x) T1 - T2^T (x) I) vec(Q), column-major vec
    rows = [np.kron(eye2, t1) - np.kron(t2.T, eye1) for t1, t2 in zip(rep1.matrices, rep2.matrices)]
    basis = null_space(np.vstack(rows), rtol)
    return [basis[:, k].reshape((d1, d2), order="F") for k in range(basis.shape[1])]


def truncated_tetrahedron_mix(t=0.6):
    """``[cos t * B_2 | sin t * B_0]``: symmetric, 5-dimensional, not balanced.

    Concatenates the spectral realizations for theta = 2 and theta = 0, so its
    arrangement space meets both eigenspaces.
    """
    g = catalog("truncated_tetrahedron")
    spec = graph_spectrum(g)
    b2 = spec.find(2.0).basis
    b0 = spec.find(0.0).basis
    return Realization(g, np.hstack([np.cos(t) * b2, np.sin(t) * b0]))


def truncated_tetrahedron_family(t=0.6, group=None):
    """3-dimensional irreducible deformation ``cos t * B_2 + sin t * B' Q``.

    ``B'`` is the other 3-dimensional eigenspace carrying the same
    representation as theta = 2, and ``Q`` an orthogonal intertwiner, so every
    member is a symmetric realization with the same representation.
    """
    from grt.symmetry import automorphism_group

    g = catalog("truncated_tetrahedron")
    group = automorphism_group(g) if group is None else group
    spec = graph_spectrum(g)
    base = Realization(g, spec.find(2.0).basis)
    rep = extract_representation(base, group)
    for eig in spec.eigs:
        if eig.multiplicity != 3 or abs(eig.value - 2.0) < 1e-6:
            continue
        other = Realization(g, eig.basis)
        qs = intertwiners(extract_representation(other, group), rep)
        if len(qs) == 1:
            q = qs[0]
            u, _, vt = np.linalg.svd(q)
            q = u @ vt
            m = np.cos(t) * base.matrix + np.sin(t) * other.matrix @ q
            r = Realization(g, m)
            r.partner_theta = eig.value
            return r
    raise PreconditionError("no eigenspace carries the theta = 2 representation")


def dodecahedron_spectral():
    return spectral_realization(catalog("dodecahedron"), 2)
