"""scikit-learn style wrapper around the spectral realization."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from grt._validation import check_adjacency, check_tolerance
from grt.errors import PreconditionError
from grt.graph import Graph
from grt.linalg import eigendecompose


class SpectralRealizer(TransformerMixin, BaseEstimator):
    """Fit the theta-eigenspace of an adjacency matrix.

    ``fit`` takes an ``n x n`` adjacency matrix (or a :class:`Graph`) and
    stores the orthonormal eigenbasis of the ``eigen_index``-th largest
    eigenvalue in ``embedding_``; its rows are the vertex positions of the
    normalized spectral realization. ``transform`` maps functions on the
    vertices (rows of length ``n``) to their coordinates in that basis, so
    ``transform(np.eye(n))`` returns ``embedding_``.

    Attributes
    ----------
    theta_ : float
    multiplicity_ : int
    embedding_ : ndarray of shape (n, multiplicity_)
    eigenvalues_, multiplicities_ : ndarrays over all distinct eigenvalues
    """

    def __init__(self, eigen_index=1, tol=1e-5):
        self.eigen_index = eigen_index
        self.tol = tol

    def fit(self, X, y=None):
        if isinstance(X, Graph):
            X = X.adjacency
        adj = check_adjacency(X)
        tol = check_tolerance(self.tol)
        spectrum = eigendecompose(adj, tol)
        if not 1 <= int(self.eigen_index) <= len(spectrum.eigs):
            raise PreconditionError(
                f"eigen_index must lie in 1..{len(spectrum.eigs)}, got {self.eigen_index}"
            )
        eig = spectrum.by_index(int(self.eigen_index))
        self.n_features_in_ = adj.shape[0]
        self.eigenvalues_ = np.array(spectrum.values)
        self.multiplicities_ = np.array(spectrum.multiplicities)
        self.theta_ = eig.value
        self.multiplicity_ = eig.multiplicity
        self.embedding_ = eig.basis
        return self

    def transform(self, X):
        check_is_fitted(self, "embedding_")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected shape (k, {self.n_features_in_}), got {X.shape}")
        return X @ self.embedding_
