"""Coverings of simplicial complexes via permutation voltages.

The pieces implemented here:

* incidence graphs (the bipartite face/cofacet graphs used to transport
  a covering of complexes to a covering of graphs),
* permutation voltage assignments on plain graphs and on incidence
  graphs, with their derived graphs,
* construction of a covering complex from voltages on the 1-skeleton of
  the base (edge voltages must compose consistently around every
  2-face; consistency then propagates to all higher faces because each
  lifted simplex is pinned by the sheet of one of its vertices),
* verification of the covering axioms for a user-supplied vertex map,
* the induced voltages on incidence graphs, and the exact integer
  factorization of the lifted coboundary through two sign diagonals.

Orientation conventions
-----------------------
For a graph edge stored as ``(u, v)``, the voltage ``p`` maps sheets at
``v`` to sheets at ``u``: the derived graph joins ``(u, p[j])`` to
``(v, j)``.  For an incidence ``(face, cofacet)`` the stored voltage
maps face sheets to cofacet sheets: sheet ``j`` of the face is incident
to sheet ``p[j]`` of the cofacet.  Fibers are always enumerated in
lexicographic order of the covering face's vertex tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import perms
from .complexes import (
    Face,
    SimplicialComplex,
    boundary_faces,
    build_complex,
    coboundary_matrix,
    relative_orientation_sign,
)
from .errors import (
    CocycleError,
    CoveringViolation,
    DimensionError,
    MalformedInputError,
    VoltageError,
)
from .perms import Perm


# -- graphs ----------------------------------------------------------------


class Graph:
    """A finite simple graph with hashable vertex labels."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        seen = set()
        out = []
        vset = set(self.vertices)
        for a, b in edges:
            if a == b:
                raise MalformedInputError(f"loop edge at {a!r}")
            if a not in vset or b not in vset:
                raise MalformedInputError(f"edge ({a!r}, {b!r}) uses an unknown vertex")
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                out.append((a, b))
        self.edges = tuple(out)

    def neighbors(self, v):
        return tuple(b if a == v else a for a, b in self.edges if v in (a, b))

    @property
    def connected(self) -> bool:
        if not self.vertices:
            return True
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        adj: dict = {v: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    def edge_set(self):
        return {frozenset(e) for e in self.edges}


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite graph between the i-faces and (i+1)-faces of a complex."""

    left: tuple
    right: tuple
    edges: tuple
    dim: int

    def as_graph(self) -> Graph:
        verts = [("l", f) for f in self.left] + [("r", f) for f in self.right]
        edges = [(("l", self.left[a]), ("r", self.right[b])) for a, b in self.edges]
        return Graph(verts, edges)


def incidence_graph(K: SimplicialComplex, i: int) -> IncidenceGraph:
    """The bipartite incidence graph between ``S_i(K)`` and ``S_{i+1}(K)``."""
    if not (K.min_dim <= i <= K.top_dim):
        raise DimensionError(f"incidence graph needs {K.min_dim} <= i <= {K.top_dim}")
    left = K.faces(i)
    right = K.faces(i + 1)
    idx = {f: c for c, f in enumerate(left)}
    edges = []
    for r, fbar in enumerate(right):
        for sub, _ in boundary_faces(fbar):
            edges.append((idx[sub], r))
    return IncidenceGraph(left, right, tuple(edges), i)


# -- voltage assignments -----------------------------------------------------


@dataclass(frozen=True)
class EdgeVoltages:
    """Permutation voltages on the edges of a graph or 1-skeleton.

    ``perms[(u, v)]`` maps sheets at ``v`` to sheets at ``u``; the
    reverse orientation is the inverse permutation, so only one
    orientation is stored.
    """

    k: int
    perms: Mapping

    def __post_init__(self):
        object.__setattr__(
            self,
            "perms",
            {tuple(e): perms.check_perm(p, self.k) for e, p in dict(self.perms).items()},
        )

    def voltage(self, a, b) -> Perm:
        if (a, b) in self.perms:
            return self.perms[(a, b)]
        if (b, a) in self.perms:
            return perms.inverse(self.perms[(b, a)])
        raise VoltageError(f"no voltage on edge ({a!r}, {b!r})")

    def has_edge(self, a, b) -> bool:
        return (a, b) in self.perms or (b, a) in self.perms


def edge_voltages(M: SimplicialComplex, k: int, assignments: Mapping | None = None) -> EdgeVoltages:
    """Voltages on the 1-skeleton of ``M``; unlisted edges get the identity."""
    table = {}
    given = {tuple(sorted(e)): perms.check_perm(p, k) for e, p in (assignments or {}).items()}
    for e in M.faces(1):
        table[e] = given.pop(e, perms.identity(k))
    if given:
        raise VoltageError(f"voltages given for non-edges: {sorted(given)}")
    return EdgeVoltages(k, table)


@dataclass(frozen=True)
class IncidenceVoltages:
    """Permutation voltages on the incidences of one dimension layer.

    ``perms[(face, cofacet)]`` maps the sheet index at the face to the
    sheet index at the cofacet.
    """

    k: int
    dim: int
    perms: Mapping

    def __post_init__(self):
        object.__setattr__(
            self,
            "perms",
            {
                (tuple(f), tuple(c)): perms.check_perm(p, self.k)
                for (f, c), p in dict(self.perms).items()
            },
        )

    def voltage(self, face, cofacet) -> Perm:
        try:
            return self.perms[(tuple(face), tuple(cofacet))]
        except KeyError:
            raise VoltageError(f"no voltage on incidence ({face!r}, {cofacet!r})") from None

    def generators(self) -> tuple[Perm, ...]:
        return tuple(sorted(set(self.perms.values())))

    def as_graph_voltages(self) -> tuple[Graph, EdgeVoltages]:
        """The incidence graph (labelled) and its voltages, cofacet side first.

        The stored face-to-cofacet permutation becomes the voltage of the
        edge ``(("r", cofacet), ("l", face))`` so the generic derived-graph
        rule reproduces the incidence adjacency of the covering complex.
        """
        left = sorted({f for f, _ in self.perms})
        right = sorted({c for _, c in self.perms})
        verts = [("l", f) for f in left] + [("r", c) for c in right]
        edges = {}
        for (f, c), p in self.perms.items():
            edges[(("r", c), ("l", f))] = p
        g = Graph(verts, list(edges))
        return g, EdgeVoltages(self.k, edges)


def derived_graph(B: Graph, psi: EdgeVoltages) -> Graph:
    """The k-sheeted derived graph of a voltage assignment.

    ``(u, i)`` and ``(v, j)`` are adjacent iff ``(u, v)`` is an edge of
    ``B`` with voltage ``p`` and ``i == p[j]``.
    """
    k = psi.k
    verts = [(v, j) for v in B.vertices for j in range(k)]
    edges = []
    for u, v in B.edges:
        p = psi.voltage(u, v)
        for j in range(k):
            edges.append(((u, p[j]), (v, j)))
    return Graph(verts, edges)


# -- covering maps -----------------------------------------------------------


@dataclass(frozen=True)
class FiberLabeling:
    """For each base face, its fiber enumerated in lexicographic order."""

    fibers: Mapping

    def __post_init__(self):
        object.__setattr__(
            self, "fibers", {tuple(g): tuple(fs) for g, fs in dict(self.fibers).items()}
        )

    def lift(self, base_face, sheet: int) -> Face:
        return self.fibers[tuple(base_face)][sheet]

    def fiber(self, base_face) -> tuple[Face, ...]:
        return self.fibers[tuple(base_face)]

    def sheet(self, base_face, cover_face) -> int:
        return self.fibers[tuple(base_face)].index(tuple(cover_face))


@dataclass(frozen=True)
class CoveringMap:
    """A verified covering of complexes with its canonical fiber labeling."""

    cover: SimplicialComplex
    base: SimplicialComplex
    vertex_map: Mapping
    degree: int
    labeling: FiberLabeling

    def map_vertex(self, v: int) -> int:
        return self.vertex_map[v]

    def map_face(self, face) -> Face:
        return tuple(sorted(self.vertex_map[v] for v in face))

    def image_order(self, face) -> tuple:
        """Pointwise images of an increasing cover face, in that order."""
        return tuple(self.vertex_map[v] for v in face)


def verify_covering(cover: SimplicialComplex, base: SimplicialComplex, vertex_map: Mapping) -> CoveringMap:
    """Check the covering axioms and return a verified :class:`CoveringMap`.

    Raises :class:`CoveringViolation` with a distinct ``kind`` and a
    witness for the first axiom that fails:

    * ``not-connected`` - the covering complex is disconnected,
    * ``unmapped-vertex`` - the vertex map is not total,
    * ``not-simplicial`` / ``degenerate-face`` - some face does not map
      to a base face of the same dimension,
    * ``fiber-overlap`` - two faces of one fiber share a vertex,
    * ``strong-violation`` - a base incidence has no lift at some fiber
      point,
    * ``fiber-size`` - fibers are not all of one constant size.
    """
    vertex_map = {int(a): int(b) for a, b in dict(vertex_map).items()}
    missing = [v for v in cover.vertices if v not in vertex_map]
    if missing:
        raise CoveringViolation("unmapped-vertex", f"vertex {missing[0]} has no image", missing[0])
    if not cover.connected:
        raise CoveringViolation(
            "not-connected",
            "covering complex must be connected",
            tuple(sorted(map(sorted, cover.components()))),
        )

    fibers: dict[Face, list[Face]] = {g: [] for g in base.all_faces()}
    for d in range(0, cover.top_dim + 1):
        for f in cover.faces(d):
            img = tuple(sorted({vertex_map[v] for v in f}))
            if len(img) != len(f):
                raise CoveringViolation(
                    "degenerate-face", f"face {f!r} collapses under the vertex map", f
                )
            if not base.has_face(img):
                raise CoveringViolation(
                    "not-simplicial", f"image {img!r} of {f!r} is not a base face", f
                )
            fibers[img].append(f)
    if base.include_empty and cover.include_empty:
        fibers[()] = [()]

    for g, fs in fibers.items():
        if len(g) == 0:
            continue
        used: set[int] = set()
        for f in fs:
            if used.intersection(f):
                raise CoveringViolation(
                    "fiber-overlap", f"fiber of {g!r} contains overlapping faces", (g, f)
                )
            used.update(f)

    # strong condition: every base incidence lifts at every fiber point
    for d in range(0, base.top_dim):
        for g in base.faces(d):
            for gbar in base.cofacets(g):
                for f in fibers[g]:
                    lifted = [
                        fbar
                        for fbar in cover.cofacets(f)
                        if tuple(sorted(vertex_map[v] for v in fbar)) == gbar
                    ]
                    if not lifted:
                        raise CoveringViolation(
                            "strong-violation",
                            f"incidence ({g!r}, {gbar!r}) has no lift at {f!r}",
                            (f, gbar),
                        )

    degree = None
    for d in range(0, base.top_dim + 1):
        for g in base.faces(d):
            n = len(fibers[g])
            if degree is None:
                degree = n
            if n != degree:
                raise CoveringViolation(
                    "fiber-size",
                    f"fiber of {g!r} has size {n}, expected {degree}",
                    g,
                )
    if cover.top_dim != base.top_dim:
        raise CoveringViolation(
            "fiber-size", "cover and base have different top dimensions", cover.top_dim
        )

    labeling = FiberLabeling({g: tuple(sorted(fs)) for g, fs in fibers.items()})
    return CoveringMap(cover, base, vertex_map, degree, labeling)


# -- derived complexes --------------------------------------------------------


@dataclass(frozen=True)
class DerivedComplexResult:
    """Outcome of building a covering complex from 1-skeleton voltages.

    ``covering`` is a verified :class:`CoveringMap` when the construction
    is connected; otherwise it is ``None`` and ``components`` lists the
    vertex sets of the pieces (each one is a covering of the base in its
    own right, only smaller).
    """

    complex: SimplicialComplex
    covering: CoveringMap | None
    components: tuple
    vertex_map: Mapping

    @property
    def connected(self) -> bool:
        return self.covering is not None


def check_cocycle(M: SimplicialComplex, psi: EdgeVoltages) -> None:
    """Voltages must compose around every 2-face: psi(u,v) o psi(v,w) == psi(u,w)."""
    for tri in M.faces(2):
        u, v, w = tri
        lhs = perms.compose(psi.voltage(u, v), psi.voltage(v, w))
        if lhs != psi.voltage(u, w):
            raise CocycleError(f"edge voltages are inconsistent around 2-face {tri!r}", tri)


def derived_complex(M: SimplicialComplex, psi: EdgeVoltages) -> DerivedComplexResult:
    """Build the k-sheeted covering complex determined by edge voltages.

    The lift of a base face anchored at sheet ``j`` places its least
    vertex on sheet ``j`` and pins every other vertex through the edge
    voltages; the 2-face cocycle precondition makes this independent of
    the pinning route.  Covering vertices are encoded as ``v * k + j``,
    so the lexicographic fiber order coincides with the anchor sheet
    order.

    A disconnected result is reported, not rejected: downstream theorem
    checks require a connected cover, but the pieces are still useful
    for study.
    """
    if not M.connected:
        raise MalformedInputError("base complex must be connected")
    k = psi.k
    for e in M.faces(1):
        if not psi.has_edge(*e):
            raise VoltageError(f"no voltage on base edge {e!r}")
    check_cocycle(M, psi)

    def lift_face(g: Face, j: int) -> Face:
        anchor = g[0]
        out = [anchor * k + j]
        for v in g[1:]:
            sheet = perms.inverse(psi.voltage(anchor, v))[j]
            out.append(v * k + sheet)
        return tuple(out)

    lifted_facets = [lift_face(g, j) for g in M.facets() for j in range(k)]
    K = build_complex(lifted_facets, include_empty=M.include_empty)
    vmap = {v: v // k for v in K.vertices}
    if K.connected:
        cov = verify_covering(K, M, vmap)
        return DerivedComplexResult(K, cov, K.components(), vmap)
    return DerivedComplexResult(K, None, K.components(), vmap)


# -- induced voltages and the coboundary factorization ------------------------


def induced_incidence_voltage(cov: CoveringMap, i: int) -> IncidenceVoltages:
    """Voltages on the base incidence graph induced by a verified covering.

    For an incidence ``(G, Gbar)`` the permutation sends sheet ``j`` to
    the sheet of the unique cofacet of ``lift(G, j)`` lying in the fiber
    of ``Gbar``; the derived graph of the result is isomorphic to the
    cover's incidence graph under the fiber labeling.
    """
    M, K = cov.base, cov.cover
    if not (0 <= i <= M.top_dim):
        raise DimensionError(f"induced voltages need 0 <= i <= {M.top_dim}, got {i}")
    table = {}
    for gbar in M.faces(i + 1):
        fiber_gbar = cov.labeling.fiber(gbar)
        sheet_of = {f: l for l, f in enumerate(fiber_gbar)}
        for g, _ in boundary_faces(gbar):
            image = [0] * cov.degree
            for j, f in enumerate(cov.labeling.fiber(g)):
                ups = [fbar for fbar in K.cofacets(f) if fbar in sheet_of]
                if len(ups) != 1:
                    raise CoveringViolation(
                        "strong-violation",
                        f"{f!r} has {len(ups)} cofacets over {gbar!r}, expected exactly 1",
                        (f, gbar),
                    )
                image[j] = sheet_of[ups[0]]
            table[(g, gbar)] = tuple(image)
    return IncidenceVoltages(cov.degree, i, table)


@dataclass(frozen=True)
class SignDiagonal:
    """Diagonal of +-1 signs indexed by (base face, sheet) pairs."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=np.int64))


@dataclass(frozen=True)
class CoboundaryFactorization:
    """Exact factorization of the lifted coboundary.

    ``cover_coboundary`` is the coboundary of the covering complex with
    rows and columns relabeled through the fiber labeling into (base
    face, sheet) order; it equals ``cofacet_signs @ voltage_coboundary @
    face_signs`` exactly, and ``residual`` is the largest absolute
    deviation (always 0 for a verified covering).
    """

    face_signs: SignDiagonal
    cofacet_signs: SignDiagonal
    voltage_coboundary: np.ndarray
    cover_coboundary: np.ndarray
    residual: int


def orientation_sign_diagonal(cov: CoveringMap, i: int) -> SignDiagonal:
    """Signs comparing each lifted face's orientation with its image's."""
    M = cov.base
    k = cov.degree
    entries = np.zeros(M.face_count(i) * k, dtype=np.int64)
    for c, g in enumerate(M.faces(i)):
        for j, f in enumerate(cov.labeling.fiber(g)):
            entries[c * k + j] = relative_orientation_sign(f, cov.image_order(f))
    return SignDiagonal(i, entries)


def voltage_coboundary_matrix(M: SimplicialComplex, psi: IncidenceVoltages, i: int) -> np.ndarray:
    """Entrywise lifted coboundary of the base from incidence voltages.

    Block row/column order is (face index) * k + sheet.  The entry at
    ``((Gbar, p[j]), (G, j))`` is the plain coboundary sign of the
    incidence, where ``p`` is its stored voltage.
    """
    if psi.dim != i:
        raise DimensionError(f"voltages are for layer {psi.dim}, not {i}")
    k = psi.k
    cols = M.faces(i)
    rows = M.faces(i + 1)
    col_index = {f: c for c, f in enumerate(cols)}
    out = np.zeros((len(rows) * k, len(cols) * k), dtype=np.int64)
    for r, gbar in enumerate(rows):
        for g, sgn in boundary_faces(gbar):
            p = psi.voltage(g, gbar)
            c = col_index[g]
            for j in range(k):
                out[r * k + p[j], c * k + j] = sgn
    return out


def relabeled_cover_coboundary(cov: CoveringMap, i: int) -> np.ndarray:
    """Cover coboundary with rows/columns in (base face, sheet) order."""
    K, M = cov.cover, cov.base
    k = cov.degree
    D = coboundary_matrix(K, i)
    col_order = [
        K.index(cov.labeling.lift(g, j)) for g in M.faces(i) for j in range(k)
    ]
    row_order = [
        K.index(cov.labeling.lift(gbar, j)) for gbar in M.faces(i + 1) for j in range(k)
    ]
    return D[np.ix_(row_order, col_order)] if D.size else D.reshape(len(row_order), len(col_order))


def coboundary_factorization(cov: CoveringMap, i: int) -> CoboundaryFactorization:
    """Factor the cover coboundary through sign diagonals, exactly.

    All arithmetic is integer; the residual must be 0 for every verified
    covering and dimension.
    """
    M = cov.base
    if not (0 <= i <= M.top_dim):
        raise DimensionError(f"factorization needs 0 <= i <= {M.top_dim}, got {i}")
    psi = induced_incidence_voltage(cov, i)
    lam_lo = orientation_sign_diagonal(cov, i)
    lam_hi = orientation_sign_diagonal(cov, i + 1)
    dpsi = voltage_coboundary_matrix(M, psi, i)
    dk = relabeled_cover_coboundary(cov, i)
    product = (lam_hi.entries[:, None] * dpsi) * lam_lo.entries[None, :]
    residual = int(np.max(np.abs(dk - product))) if dk.size else 0
    return CoboundaryFactorization(lam_lo, lam_hi, dpsi, dk, residual)
