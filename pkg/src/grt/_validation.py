"""Input validation helpers shared by the public functions and estimators."""

from __future__ import annotations

import numbers

import numpy as np


def check_tolerance(tol, name="tol"):
    if not isinstance(tol, numbers.Real) or not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"{name} must be a positive finite real, got {tol!r}")
    return float(tol)


def check_symmetric(matrix, tol=1e-10):
    """Return ``matrix`` as a float array, raising if it is not square and symmetric."""
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains non-finite entries")
    if arr.size and np.max(np.abs(arr - arr.T)) > tol:
        raise ValueError("matrix is not symmetric")
    return arr


def check_adjacency(adj):
    """Validate a 0/1 adjacency matrix of a simple undirected graph."""
    arr = np.asarray(adj)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    arr = arr.astype(np.int64)
    if np.any(np.diag(arr)):
        raise ValueError("adjacency has loops on the diagonal")
    if np.any(arr != arr.T):
        raise ValueError("adjacency is not symmetric")
    return arr


def check_permutation(perm, n=None):
    p = tuple(int(x) for x in perm)
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {perm!r}")
    if n is not None and len(p) != n:
        raise ValueError(f"permutation has degree {len(p)}, expected {n}")
    return p


def check_matrix(matrix, n_rows=None, name="matrix"):
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if n_rows is not None and arr.shape[0] != n_rows:
        raise ValueError(f"{name} has {arr.shape[0]} rows, expected {n_rows}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr
