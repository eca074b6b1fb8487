"""Finite abstract simplicial complexes with canonical orientations.

Faces are tuples of non-negative integer vertex ids in strictly
increasing order; the increasing order *is* the canonical orientation.
The empty face ``()`` has dimension -1 and is included by default so
that reduced cohomology and the degree-(-1) coboundary exist.

All structures here are immutable after construction and every
operation is a pure function, so concurrent reads are safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import DimensionError, MalformedInputError, WeightError

Face = tuple


def as_face(vertices) -> Face:
    """Normalize an iterable of vertex ids into a canonical face tuple."""
    vs = list(vertices)
    out = []
    for v in vs:
        iv = int(v)
        if iv != v or iv < 0:
            raise MalformedInputError(f"vertex {v!r} is not a non-negative integer")
        out.append(iv)
    if len(set(out)) != len(out):
        raise MalformedInputError(f"face {vs!r} repeats a vertex")
    return tuple(sorted(out))


@dataclass(frozen=True)
class OrientedFace:
    """A face with a parity relative to the canonical (increasing) order."""

    base: Face
    parity: int = 1

    def __post_init__(self):
        if self.parity not in (1, -1):
            raise MalformedInputError("parity must be +1 or -1")
        if tuple(sorted(self.base)) != tuple(self.base):
            raise MalformedInputError("base face must be in increasing vertex order")

    @property
    def dim(self) -> int:
        return len(self.base) - 1


def _as_oriented(f) -> OrientedFace:
    if isinstance(f, OrientedFace):
        return f
    return OrientedFace(as_face(f))


class SimplicialComplex:
    """A downward-closed family of faces, listed per dimension.

    Within each dimension the faces are sorted lexicographically, and that
    ordering defines the row/column indices of every matrix derived from
    the complex.  Use :func:`build_complex` to construct one from facets.
    """

    def __init__(self, faces_by_dim: Mapping[int, Iterable[Face]], include_empty: bool = True):
        faces: dict[int, tuple[Face, ...]] = {}
        for d, fs in faces_by_dim.items():
            fs = tuple(sorted(set(tuple(f) for f in fs)))
            if fs:
                faces[int(d)] = fs
        if include_empty:
            faces[-1] = ((),)
        else:
            faces.pop(-1, None)
        dims = [d for d in faces if d >= 0]
        if not dims:
            raise MalformedInputError("complex has no faces of dimension >= 0")
        self._faces = faces
        self._include_empty = include_empty
        self._top_dim = max(dims)
        self._index = {d: {f: i for i, f in enumerate(fs)} for d, fs in faces.items()}
        self._validate()
        self._cofacets: dict[Face, tuple[Face, ...]] | None = None
        self._components = _components(self.faces(0), self.faces(1))

    def _validate(self):
        for d, fs in self._faces.items():
            for f in fs:
                if len(f) != d + 1:
                    raise MalformedInputError(f"face {f!r} listed at dimension {d}")
                as_face(f)
                if d >= 0:
                    for sub in combinations(f, d):
                        if sub not in self._index.get(d - 1, {}) and not (d == 0 and not self._include_empty):
                            raise MalformedInputError(
                                f"complex is not downward closed: {sub!r} missing under {f!r}"
                            )

    # -- basic queries ---------------------------------------------------

    @property
    def top_dim(self) -> int:
        return self._top_dim

    @property
    def include_empty(self) -> bool:
        return self._include_empty

    @property
    def min_dim(self) -> int:
        return -1 if self._include_empty else 0

    def dims(self) -> range:
        return range(self.min_dim, self._top_dim + 1)

    def faces(self, dim: int) -> tuple[Face, ...]:
        return self._faces.get(dim, ())

    def face_count(self, dim: int) -> int:
        return len(self.faces(dim))

    def index(self, face: Face) -> int:
        d = len(face) - 1
        try:
            return self._index[d][tuple(face)]
        except KeyError:
            raise MalformedInputError(f"{face!r} is not a face of the complex") from None

    def has_face(self, face) -> bool:
        face = tuple(face)
        return face in self._index.get(len(face) - 1, {})

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(f[0] for f in self.faces(0))

    def all_faces(self):
        for d in self.dims():
            yield from self.faces(d)

    def cofacets(self, face: Face) -> tuple[Face, ...]:
        """Faces of one dimension higher containing ``face``."""
        if self._cofacets is None:
            table: dict[Face, list[Face]] = {f: [] for f in self.all_faces()}
            for d in range(0, self._top_dim + 1):
                for f in self.faces(d):
                    for j in range(len(f)):
                        sub = f[:j] + f[j + 1 :]
                        if sub in table:
                            table[sub].append(f)
            self._cofacets = {f: tuple(v) for f, v in table.items()}
        face = tuple(face)
        if face not in self._cofacets:
            raise MalformedInputError(f"{face!r} is not a face of the complex")
        return self._cofacets[face]

    def is_facet(self, face) -> bool:
        return not self.cofacets(face)

    def facets(self) -> tuple[Face, ...]:
        out = []
        for d in range(0, self._top_dim + 1):
            out.extend(f for f in self.faces(d) if self.is_facet(f))
        return tuple(out)

    # -- connectivity ----------------------------------------------------

    @property
    def connected(self) -> bool:
        return len(self._components) <= 1

    def components(self) -> tuple[frozenset, ...]:
        """Vertex sets of the connected components of the 1-skeleton."""
        return self._components

    # -- dunder ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._faces == other._faces and self._include_empty == other._include_empty

    def __repr__(self):
        counts = ", ".join(f"S_{d}={self.face_count(d)}" for d in self.dims())
        return f"SimplicialComplex({counts})"


def _components(vertices, edges) -> tuple[frozenset, ...]:
    parent = {f[0]: f[0] for f in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict[int, set] = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return tuple(sorted((frozenset(g) for g in groups.values()), key=sorted))


def build_complex(facets, include_empty: bool = True) -> SimplicialComplex:
    """Downward closure of a list of facets.

    Parameters
    ----------
    facets : iterable of vertex iterables
        Non-empty collection of non-empty vertex sets.  Faces implied by
        inclusion are generated automatically.
    include_empty : bool
        Include the empty face of dimension -1 (the reduced convention).

    Returns
    -------
    SimplicialComplex
        Faces sorted lexicographically in every dimension, 1-skeleton
        connectivity precomputed.
    """
    facets = list(facets)
    if not facets:
        raise MalformedInputError("facet list is empty")
    faces: set[Face] = set()
    for raw in facets:
        f = as_face(raw)
        if not f:
            raise MalformedInputError("facets must be non-empty vertex sets")
        for r in range(1, len(f) + 1):
            faces.update(combinations(f, r))
    by_dim: dict[int, list[Face]] = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    return SimplicialComplex(by_dim, include_empty=include_empty)


def boundary_faces(f) -> list[tuple[Face, int]]:
    """Boundary of an oriented face: pairs ``(face, sign)``.

    The j-th boundary face omits the j-th vertex and carries sign
    ``(-1)**j`` times the parity of ``f``.  The boundary of a vertex is
    the empty face with sign +1.
    """
    of = _as_oriented(f)
    if of.dim < 0:
        raise DimensionError("the empty face has no boundary")
    out = []
    for j in range(len(of.base)):
        sub = of.base[:j] + of.base[j + 1 :]
        out.append((sub, (-1) ** j * of.parity))
    return out


def coboundary_matrix(K: SimplicialComplex, i: int) -> np.ndarray:
    """Integer matrix of the degree-i coboundary map.

    Rows are indexed by the (i+1)-faces, columns by the i-faces, both in
    their canonical orders.  Entry (row F-bar, col F) is the orientation
    sign of F inside the boundary of F-bar, or 0 when F is not a
    boundary face.  For ``i == top_dim`` the matrix has zero rows.
    """
    lo = K.min_dim
    if not (lo <= i <= K.top_dim):
        raise DimensionError(f"coboundary dimension {i} outside [{lo}, {K.top_dim}]")
    cols = K.faces(i)
    rows = K.faces(i + 1)
    col_index = {f: c for c, f in enumerate(cols)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, fbar in enumerate(rows):
        for sub, sgn in boundary_faces(fbar):
            D[r, col_index[sub]] = sgn
    return D


# -- weights --------------------------------------------------------------

COMBINATORIAL_KIND = "combinatorial"
NORMALIZED_KIND = "normalized"
EXPLICIT_KIND = "explicit"


@dataclass(frozen=True)
class WeightScheme:
    """Positive face weights defining the cochain inner products.

    ``combinatorial`` puts weight 1 on every face.  ``normalized`` puts 1
    on the facets and gives every other face the sum of its cofacets'
    weights (this recursion also defines the weight of the empty face as
    the sum of the vertex weights).  ``explicit`` carries user weights.
    """

    kind: str
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in (COMBINATORIAL_KIND, NORMALIZED_KIND, EXPLICIT_KIND):
            raise MalformedInputError(f"unknown weight scheme {self.kind!r}")

    @staticmethod
    def explicit(mapping) -> "WeightScheme":
        vals = tuple(sorted((as_face(f), float(w)) for f, w in dict(mapping).items()))
        return WeightScheme(EXPLICIT_KIND, vals)


COMBINATORIAL = WeightScheme(COMBINATORIAL_KIND)
NORMALIZED = WeightScheme(NORMALIZED_KIND)


def compute_weights(K: SimplicialComplex, scheme: WeightScheme) -> dict[Face, float]:
    """Weight of every face of ``K`` under ``scheme``.

    The normalized recursion runs top-down by dimension: facets get 1,
    every other face the sum of its cofacets' weights.  Explicit schemes
    must cover every face with a strictly positive weight.
    """
    if scheme.kind == COMBINATORIAL_KIND:
        return {f: 1.0 for f in K.all_faces()}
    if scheme.kind == NORMALIZED_KIND:
        w: dict[Face, float] = {}
        for d in range(K.top_dim, K.min_dim - 1, -1):
            for f in K.faces(d):
                cof = K.cofacets(f)
                w[f] = 1.0 if not cof else sum(w[c] for c in cof)
        return w
    table = dict(scheme.values)
    out = {}
    for f in K.all_faces():
        if f not in table:
            raise WeightError(f"explicit scheme does not weight face {f!r}")
        if table[f] <= 0:
            raise WeightError(f"weight of {f!r} must be positive, got {table[f]}")
        out[f] = float(table[f])
    return out


def weight_vector(K: SimplicialComplex, i: int, weights: Mapping[Face, float]) -> np.ndarray:
    """Diagonal of the weight matrix at dimension ``i``, in face order."""
    return np.array([weights[f] for f in K.faces(i)], dtype=float)


def relative_orientation_sign(f, image_vertex_order) -> int:
    """Orientation sign of a face relative to its pointwise image.

    ``image_vertex_order`` lists the images of the vertices of ``f`` in
    the order ``f`` carries them.  Returns +1 when that sequence is an
    even permutation of its sorted order, -1 otherwise.
    """
    of = _as_oriented(f)
    image = [int(v) for v in image_vertex_order]
    if len(image) != len(of.base):
        raise MalformedInputError("image sequence length does not match the face")
    if len(set(image)) != len(image):
        raise MalformedInputError(
            f"image {image!r} repeats a vertex; the map is not a bijection on the face"
        )
    inversions = sum(
        1 for a in range(len(image)) for b in range(a + 1, len(image)) if image[a] > image[b]
    )
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Cochain:
    """A vector indexed by the canonical ordering of the dim-faces."""

    dim: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values))
