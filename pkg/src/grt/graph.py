"""Simple undirected graphs, the example catalog, distances and file formats.

Vertices are always ``0..n-1``. Catalog families use the following frozen
vertex orders:

- ``cycle [n]``: ``i ~ i+1 (mod n)``.
- ``complete [n]``: all pairs.
- ``complete_bipartite [m, n]``: parts ``0..m-1`` and ``m..m+n-1``.
- ``complete_multipartite [p1, ..., pk]``: consecutive blocks.
- ``prism [n]``: ``C_n x K_2`` via :func:`cartesian_product` (``K2`` first),
  so ``0..n-1`` is one n-gon, ``n..2n-1`` the other, and ``i ~ i+n``.
- ``torus [m, n]``: ``C_m x C_n`` via :func:`cartesian_product`; vertex
  ``(a, b)`` is ``a * n + b``.
- ``petersen`` / ``dodecahedron``: generalized Petersen graphs GP(5,2) and
  GP(10,2); outer cycle ``0..m-1``, inner ``m..2m-1`` with ``m+i ~ m+(i+2)``,
  spokes ``i ~ m+i``.
- ``truncated_tetrahedron``: ordered pairs ``(v, w)`` of distinct tetrahedron
  vertices in lexicographic order; ``(v, w) ~ (v, w')`` and ``(v, w) ~ (w, v)``.
- ``icosahedron``, ``cuboctahedron``, ``rhombic_dodecahedron``, ``cell24``:
  built from the coordinates returned by :func:`catalog_coordinates`
  (row order = vertex order), edges between points at minimal positive
  squared distance, except the rhombic dodecahedron whose edges join each
  cube vertex to the three octahedron vertices in its octant.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from grt._validation import check_adjacency
from grt.errors import GraphFormatError, PreconditionError

UNREACHABLE = np.iinfo(np.int64).max
"""Distance marker for vertex pairs in different components."""

GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on ``{0, ..., n-1}``."""

    n: int
    edges: frozenset
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {self.n!r}")
        normalized = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise GraphFormatError(f"loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise GraphFormatError(f"edge {(i, j)} out of range for n={self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n, edges, name=""):
        return cls(n, frozenset(tuple(e) for e in edges), name)

    @classmethod
    def from_adjacency(cls, adj, name=""):
        arr = check_adjacency(adj)
        i, j = np.nonzero(np.triu(arr, 1))
        return cls(arr.shape[0], frozenset(zip(i.tolist(), j.tolist())), name)

    @cached_property
    def adjacency(self):
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        a.flags.writeable = False
        return a

    @cached_property
    def edge_list(self):
        """Edges as a sorted tuple of ``(i, j)`` with ``i < j``."""
        return tuple(sorted(self.edges))

    @cached_property
    def degrees(self):
        d = self.adjacency.sum(axis=1)
        d.flags.writeable = False
        return d

    def neighbors(self, i):
        return np.flatnonzero(self.adjacency[i])

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def is_regular(self):
        return bool(np.all(self.degrees == self.degrees[0]))

    @property
    def degree(self):
        """Common vertex degree; raises for non-regular graphs."""
        if not self.is_regular:
            raise PreconditionError("graph is not regular")
        return int(self.degrees[0])

    @cached_property
    def arcs(self):
        """Ordered adjacent pairs, sorted."""
        return tuple(sorted(itertools.chain(self.edges, ((j, i) for i, j in self.edges))))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"Graph{label}(n={self.n}, |E|={self.num_edges})"


@dataclass(frozen=True)
class DistanceTable:
    dist: np.ndarray
    diam: int
    connected: bool

    def shell(self, i, delta):
        """Vertices at distance exactly ``delta`` from ``i``."""
        return np.flatnonzero(self.dist[i] == delta)

    def pairs(self, delta):
        """Ordered pairs at distance ``delta`` (the set D_delta), sorted."""
        i, j = np.nonzero(self.dist == delta)
        return list(zip(i.tolist(), j.tolist()))


def distances(g):
    """All-pairs BFS distances. Disconnected pairs carry :data:`UNREACHABLE`."""
    sp = shortest_path(csr_matrix(g.adjacency), method="D", unweighted=True, directed=False)
    finite = np.isfinite(sp)
    dist = np.full(sp.shape, UNREACHABLE, dtype=np.int64)
    dist[finite] = sp[finite].astype(np.int64)
    dist.flags.writeable = False
    return DistanceTable(dist=dist, diam=int(dist[finite].max()), connected=bool(finite.all()))


def cartesian_product(g, h):
    """Cartesian product; vertex ``(a, b)`` gets index ``a * h.n + b``."""
    m = h.n
    edges = set()
    for a in range(g.n):
        for b, b2 in h.edges:
            edges.add((a * m + b, a * m + b2))
    for a, a2 in g.edges:
        for b in range(m):
            edges.add((a * m + b, a2 * m + b))
    name = f"{g.name}x{h.name}" if g.name and h.name else ""
    return Graph(g.n * m, frozenset(edges), name)


# -- catalog -----------------------------------------------------------------


def _cycle(n):
    if n < 3:
        raise PreconditionError("cycle needs n >= 3")
    return {(i, (i + 1) % n) for i in range(n)}, n


def _complete_multipartite(parts):
    if not parts or any(p < 1 for p in parts):
        raise PreconditionError("part sizes must be positive")
    offsets = np.cumsum([0] + list(parts))
    label = np.repeat(np.arange(len(parts)), parts)
    n = int(offsets[-1])
    edges = {(i, j) for i in range(n) for j in range(i + 1, n) if label[i] != label[j]}
    return edges, n


def _generalized_petersen(m, k):
    edges = set()
    for i in range(m):
        edges.add((i, (i + 1) % m))
        edges.add((m + i, m + (i + k) % m))
        edges.add((i, m + i))
    return edges, 2 * m


def _truncated_tetrahedron():
    arcs = [(v, w) for v in range(4) for w in range(4) if v != w]
    index = {a: k for k, a in enumerate(arcs)}
    edges = set()
    for (v, w), k in index.items():
        for w2 in range(4):
            if w2 not in (v, w):
                edges.add((k, index[(v, w2)]))
        edges.add((k, index[(w, v)]))
    return edges, 12


def _min_distance_edges(points):
    diff = points[:, None, :] - points[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    positive = sq[sq > 1e-9]
    target = positive.min()
    i, j = np.nonzero(np.triu(np.abs(sq - target) <= 1e-9 * max(1.0, target), 1))
    return set(zip(i.tolist(), j.tolist()))


def _icosahedron_points():
    pts = []
    for shift in range(3):
        for s1, s2 in itertools.product((1, -1), repeat=2):
            p = [0.0, s1 * 1.0, s2 * GOLDEN]
            pts.append(p[-shift:] + p[:-shift] if shift else p)
    return np.array(pts)


def _cuboctahedron_points():
    pts = []
    for zero in range(3):
        for s1, s2 in itertools.product((1, -1), repeat=2):
            p = [s1 * 1.0, s2 * 1.0]
            p.insert(zero, 0.0)
            pts.append(p)
    return np.array(pts)


def _rhombic_dodecahedron_points():
    octa = []
    for k in range(3):
        for s in (1, -1):
            p = [0.0, 0.0, 0.0]
            p[k] = 2.0 * s
            octa.append(p)
    cube = [list(map(float, c)) for c in itertools.product((1, -1), repeat=3)]
    return np.array(octa + cube)


def _cell24_points():
    pts = []
    for k in range(4):
        for s in (1, -1):
            p = [0.0] * 4
            p[k] = float(s)
            pts.append(p)
    for signs in itertools.product((1, -1), repeat=4):
        pts.append([0.5 * s for s in signs])
    return math.sqrt(2) * np.array(pts)


def _rhombic_dodecahedron_edges(points):
    edges = set()
    for c in range(6, 14):
        for o in range(6):
            if np.dot(points[c], points[o]) > 0:
                edges.add((o, c))
    return edges


_COORDINATES = {
    "icosahedron": _icosahedron_points,
    "cuboctahedron": _cuboctahedron_points,
    "rhombic_dodecahedron": _rhombic_dodecahedron_points,
    "cell24": _cell24_points,
}

# family name -> number of integer parameters (None = variadic, at least one)
CATALOG = {
    "cycle": 1,
    "complete": 1,
    "complete_bipartite": 2,
    "complete_multipartite": None,
    "prism": 1,
    "torus": 2,
    "petersen": 0,
    "dodecahedron": 0,
    "icosahedron": 0,
    "truncated_tetrahedron": 0,
    "cuboctahedron": 0,
    "rhombic_dodecahedron": 0,
    "cell24": 0,
}


def catalog_coordinates(name):
    """Skeleton coordinates for the coordinate-built catalog polytopes.

    Rows follow the catalog vertex order. The 24-cell uses
    ``sqrt(2) * (+-1, 0, 0, 0)`` and ``sqrt(2) * (+-1/2, ..., +-1/2)``.
    """
    try:
        return _COORDINATES[name]()
    except KeyError:
        raise PreconditionError(f"no coordinates stored for {name!r}") from None


def catalog(name, params=()):
    """Build a named example graph (see module docstring for vertex orders)."""
    if name not in CATALOG:
        raise PreconditionError(f"unknown catalog graph {name!r}; choose from {sorted(CATALOG)}")
    params = [int(p) for p in params]
    arity = CATALOG[name]
    if arity is None:
        if not params:
            raise PreconditionError(f"{name} needs at least one part size")
    elif len(params) != arity:
        raise PreconditionError(f"{name} takes {arity} parameter(s), got {len(params)}")

    label = name if not params else f"{name}({','.join(map(str, params))})"
    if name == "prism":
        if params[0] < 3:
            raise PreconditionError("prism needs n >= 3")
        g = cartesian_product(catalog("complete", [2]), catalog("cycle", params))
        return Graph(g.n, g.edges, label)
    if name == "torus":
        g = cartesian_product(catalog("cycle", params[:1]), catalog("cycle", params[1:]))
        return Graph(g.n, g.edges, label)

    if name == "cycle":
        edges, n = _cycle(params[0])
    elif name == "complete":
        if params[0] < 1:
            raise PreconditionError("complete graph needs n >= 1")
        edges, n = _complete_multipartite([1] * params[0])
    elif name in ("complete_bipartite", "complete_multipartite"):
        edges, n = _complete_multipartite(params)
    elif name == "petersen":
        edges, n = _generalized_petersen(5, 2)
    elif name == "dodecahedron":
        edges, n = _generalized_petersen(10, 2)
    elif name == "truncated_tetrahedron":
        edges, n = _truncated_tetrahedron()
    elif name == "rhombic_dodecahedron":
        pts = _rhombic_dodecahedron_points()
        edges, n = _rhombic_dodecahedron_edges(pts), len(pts)
    else:
        pts = _COORDINATES[name]()
        edges, n = _min_distance_edges(pts), len(pts)
    return Graph(n, frozenset(edges), label)


# -- file formats --------------------------------------------------------------

GRAPH6_HEADER = b">>graph6<<"


def _graph6_size(data):
    if not data:
        raise GraphFormatError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        chunk, width = data[2:8], 6
        start = 8
    else:
        chunk, width = data[1:4], 3
        start = 4
    if len(chunk) != width:
        raise GraphFormatError("truncated graph6 size field")
    n = 0
    for c in chunk:
        n = (n << 6) | (c - 63)
    return n, start


def _decode_graph6(data):
    data = data.strip()
    if data.startswith(GRAPH6_HEADER):
        data = data[len(GRAPH6_HEADER):]
    data = data.split(b"\n", 1)[0].strip()
    if any(c < 63 or c > 126 for c in data):
        raise GraphFormatError("graph6 bytes must lie in 63..126")
    n, start = _graph6_size(data)
    if n < 1:
        raise GraphFormatError("graph6 encodes an empty graph")
    body = data[start:]
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {(nbits + 5) // 6}")
    bits = []
    for c in body:
        v = c - 63
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphFormatError("graph6 padding bits are not zero")
    edges = set()
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.add((i, j))
            k += 1
    return Graph(n, frozenset(edges))


def _encode_graph6(g):
    n = g.n
    if n <= 62:
        out = bytearray([n + 63])
    elif n <= 258047:
        out = bytearray([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    else:
        out = bytearray([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    adj = g.adjacency
    bits = [int(adj[i, j]) for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return bytes(out)


def _checked_edges(pairs, n=None):
    seen = set()
    for i, j in pairs:
        if i == j:
            raise GraphFormatError(f"loop at vertex {i}")
        if i < 0 or j < 0 or (n is not None and (i >= n or j >= n)):
            raise GraphFormatError(f"vertex out of range in edge {(i, j)}")
        key = (min(i, j), max(i, j))
        if key in seen:
            warnings.warn(f"duplicate edge {key} ignored", stacklevel=3)
        seen.add(key)
    return seen


def _decode_edge_list(text):
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    n = int(body[2:])
                except ValueError:
                    raise GraphFormatError(f"line {lineno}: bad vertex count header") from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex in {raw!r}") from None
    edges = _checked_edges(pairs, n)
    if n is None:
        if not edges:
            raise GraphFormatError("edge list is empty and has no '# n=' header")
        n = 1 + max(max(e) for e in edges)
    return Graph(n, frozenset(edges))


def _decode_json(text):
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        pairs = [(int(i), int(j)) for i, j in obj["edges"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise GraphFormatError(f"invalid graph JSON: {exc}") from None
    if n < 1:
        raise GraphFormatError("graph JSON needs n >= 1")
    return Graph(n, frozenset(_checked_edges(pairs, n)))


INPUT_FORMATS = ("graph6", "edge_list", "json")


def _canonical_format(fmt):
    fmt = fmt.replace("-", "_")
    if fmt == "edgelist":
        fmt = "edge_list"
    if fmt not in INPUT_FORMATS:
        raise GraphFormatError(f"unknown graph format {fmt!r}")
    return fmt


def parse_graph(data, format):
    """Decode ``data`` (bytes or str) in one of ``graph6``, ``edge_list``, ``json``."""
    fmt = _canonical_format(format)
    if isinstance(data, str):
        data = data.encode("utf-8")
    if fmt == "graph6":
        return _decode_graph6(data)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise GraphFormatError("input is not valid UTF-8") from None
    if fmt == "edge_list":
        return _decode_edge_list(text)
    return _decode_json(text)


def serialize_graph(g, format):
    """Encode ``g``; the inverse of :func:`parse_graph`."""
    fmt = _canonical_format(format)
    if fmt == "graph6":
        return _encode_graph6(g) + b"\n"
    if fmt == "edge_list":
        lines = [f"# n={g.n}"] + [f"{i} {j}" for i, j in g.edge_list]
        return ("\n".join(lines) + "\n").encode("utf-8")
    return (json.dumps(graph_to_dict(g)) + "\n").encode("utf-8")


def graph_to_dict(g):
    return {"n": g.n, "edges": [list(e) for e in g.edge_list]}
