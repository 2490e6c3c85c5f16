import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from grt.errors import PreconditionError
from grt.estimators import SpectralRealizer
from grt.linalg import graph_spectrum
from grt.realization import spectral_realization
from _cases import graph


def test_fit_matches_spectral_realization():
    g = graph("dodecahedron")
    est = SpectralRealizer(eigen_index=2).fit(g.adjacency)
    r = spectral_realization(g, 2)
    assert est.theta_ == pytest.approx(np.sqrt(5))
    assert est.multiplicity_ == 3
    assert est.embedding_.shape == (20, 3)
    assert np.allclose(est.embedding_, r.matrix)
    assert np.allclose(est.transform(np.eye(20)), est.embedding_)
    spec = graph_spectrum(g)
    assert np.allclose(est.eigenvalues_, spec.values)
    assert list(est.multiplicities_) == list(spec.multiplicities)


def test_fit_accepts_graph():
    g = graph("petersen")
    a = SpectralRealizer(eigen_index=3).fit(g)
    b = SpectralRealizer(eigen_index=3).fit(g.adjacency)
    assert np.array_equal(a.embedding_, b.embedding_)


def test_fit_transform():
    g = graph("cycle", (6,))
    out = SpectralRealizer(eigen_index=2).fit_transform(g.adjacency)
    assert out.shape == (6, 2)


def test_transform_projects_eigenvectors():
    g = graph("dodecahedron")
    est = SpectralRealizer(eigen_index=2).fit(g)
    u = est.embedding_ @ np.array([1.0, 2.0, 3.0])
    assert np.allclose(est.transform(u[None, :]), [[1.0, 2.0, 3.0]])


def test_params_and_clone():
    est = SpectralRealizer(eigen_index=4, tol=1e-6)
    assert est.get_params() == {"eigen_index": 4, "tol": 1e-6}
    other = clone(est)
    assert other.get_params() == est.get_params()
    assert not hasattr(other, "embedding_")
    est.set_params(eigen_index=2)
    assert est.eigen_index == 2


def test_errors():
    with pytest.raises(NotFittedError):
        SpectralRealizer().transform(np.eye(3))
    with pytest.raises(PreconditionError):
        SpectralRealizer(eigen_index=9).fit(graph("petersen"))
    est = SpectralRealizer().fit(graph("petersen"))
    with pytest.raises(ValueError):
        est.transform(np.eye(4))
    with pytest.raises(Exception):
        SpectralRealizer().fit(np.ones((3, 4)))


def test_in_pipeline():
    g = graph("cuboctahedron")
    pipe = make_pipeline(SpectralRealizer(eigen_index=2))
    assert pipe.fit_transform(g.adjacency).shape == (12, 3)
