"""Up/down/full Laplace operators and tolerance-aware spectra.

The matrix conventions follow the coboundary layout of
:mod:`liftlap.complexes`: the degree-i coboundary has rows indexed by
(i+1)-faces and columns by i-faces, so the i-up operator is
``W_i^{-1} D_i^T W_{i+1} D_i`` and the i-down operator is
``D_{i-1} W_{i-1}^{-1} D_{i-1}^T W_i``.  Incidence signings multiply
coboundary entries by +-1, incidence weightings by a nonzero complex
number (the adjoint then uses the conjugate transpose).

Everything is dense: the package targets desk-scale complexes where
dense eigensolves are simpler and exactly testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .complexes import (
    COMBINATORIAL,
    Face,
    SimplicialComplex,
    WeightScheme,
    coboundary_matrix,
    compute_weights,
    weight_vector,
)
from .errors import DimensionError, EigensolverError, WeightError

UP = "up"
DOWN = "down"
FULL = "full"

DEFAULT_TOL = 1e-8
HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class IncidenceSigning:
    """A +-1 sign on every (face, cofacet) incidence.

    Only the flipped pairs are stored; every incidence not listed
    carries +1, matching the on-disk format.
    """

    flips: frozenset = frozenset()

    @staticmethod
    def from_pairs(pairs) -> "IncidenceSigning":
        return IncidenceSigning(frozenset((tuple(a), tuple(b)) for a, b in pairs))

    def sign(self, face: Face, cofacet: Face) -> int:
        return -1 if (tuple(face), tuple(cofacet)) in self.flips else 1


class IncidenceWeighting:
    """A nonzero complex weight on every (face, cofacet) incidence.

    Pairs not listed carry weight 1.
    """

    def __init__(self, values: Mapping | None = None):
        self._values = {}
        for (a, b), v in (values or {}).items():
            v = complex(v)
            if v == 0:
                raise WeightError(f"incidence weight for ({a!r}, {b!r}) must be nonzero")
            self._values[(tuple(a), tuple(b))] = v

    def value(self, face: Face, cofacet: Face) -> complex:
        return self._values.get((tuple(face), tuple(cofacet)), 1.0 + 0.0j)

    def items(self):
        return self._values.items()

    def __eq__(self, other):
        return isinstance(other, IncidenceWeighting) and self._values == other._values


def decorated_coboundary(K: SimplicialComplex, i: int, decoration=None) -> np.ndarray:
    """Coboundary matrix with signs or complex weights applied entrywise."""
    D = coboundary_matrix(K, i)
    if decoration is None:
        return D
    if isinstance(decoration, IncidenceSigning):
        scale = decoration.sign
        out = D.copy()
    elif isinstance(decoration, IncidenceWeighting):
        scale = decoration.value
        out = D.astype(complex)
    else:
        raise TypeError(f"unsupported decoration {decoration!r}")
    cols = K.faces(i)
    rows = K.faces(i + 1)
    for r, fbar in enumerate(rows):
        for c, f in enumerate(cols):
            if D[r, c] != 0:
                out[r, c] = D[r, c] * scale(f, fbar)
    return out


@dataclass
class OperatorMatrix:
    """A Laplace operator matrix tied to its dimension and weight diagonal.

    ``weights`` is the diagonal of the weight matrix on the operator's
    own cochain degree; it drives the similarity transform used by the
    eigensolver path.  ``decoration`` records the signing or weighting
    the coboundary was built with, if any.
    """

    matrix: np.ndarray
    dim: int
    kind: str
    weights: np.ndarray
    decoration: object = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        self.weights = np.asarray(self.weights, dtype=float)
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or len(self.weights) != n:
            raise DimensionError("operator matrix must be square and match its weights")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _up_range(K: SimplicialComplex):
    return K.min_dim, K.top_dim


def _down_range(K: SimplicialComplex):
    return K.min_dim + 1, K.top_dim


def laplacian_matrix(
    K: SimplicialComplex,
    i: int,
    kind: str = UP,
    scheme: WeightScheme = COMBINATORIAL,
    decoration=None,
) -> OperatorMatrix:
    """Assemble the i-dimensional up/down/full Laplace operator of ``K``.

    ``decoration`` (an :class:`IncidenceSigning` or
    :class:`IncidenceWeighting`) applies to the coboundary layer each
    part actually uses: (i, i+1) for up, (i-1, i) for down.

    Valid dimensions: up needs ``min_dim <= i <= top_dim`` (the top
    dimension yields a zero matrix), down needs ``min_dim + 1 <= i <=
    top_dim``; full needs both.
    """
    w = compute_weights(K, scheme)
    w_i = weight_vector(K, i, w) if K.faces(i) else np.zeros(0)
    if kind not in (UP, DOWN, FULL):
        raise DimensionError(f"unknown operator kind {kind!r}")
    lo_up, hi_up = _up_range(K)
    lo_dn, hi_dn = _down_range(K)

    def up_part():
        if not (lo_up <= i <= hi_up):
            raise DimensionError(f"up operator needs {lo_up} <= i <= {hi_up}, got {i}")
        if i == K.top_dim:
            n = K.face_count(i)
            return np.zeros((n, n))
        D = decorated_coboundary(K, i, decoration)
        w_hi = weight_vector(K, i + 1, w)
        return (D.conj().T * w_hi) @ D / w_i[:, None]

    def down_part():
        if not (lo_dn <= i <= hi_dn):
            raise DimensionError(f"down operator needs {lo_dn} <= i <= {hi_dn}, got {i}")
        D = decorated_coboundary(K, i - 1, decoration)
        w_lo = weight_vector(K, i - 1, w)
        return (D / w_lo) @ (D.conj().T * w_i)

    if kind == UP:
        mat = up_part()
    elif kind == DOWN:
        mat = down_part()
    else:
        mat = up_part() + down_part()
    return OperatorMatrix(mat, i, kind, w_i, decoration)


def symmetrized_form(matrix: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Similarity transform ``W^{1/2} L W^{-1/2}`` with identical spectrum.

    For the operators assembled here the result is Hermitian positive
    semidefinite, which is what the eigensolver path relies on.
    """
    weights = np.asarray(weights, dtype=float)
    if np.any(weights <= 0):
        raise WeightError("weights must be strictly positive")
    root = np.sqrt(weights)
    return (matrix * root[:, None]) / root[None, :]


def spectrum(op: OperatorMatrix, tol: float = DEFAULT_TOL) -> "SpectrumMultiset":
    """Eigenvalues of an operator, sorted ascending, clamped at zero.

    Uses the symmetrized form; its hermiticity residue is asserted at
    ``1e-10`` (relative), and eigenvalues in ``[-1e-9, 0)`` are clamped
    to 0 with the clamp count recorded.  Anything below ``-1e-9`` means
    the operator was not positive semidefinite and raises.
    """
    if op.size == 0:
        return SpectrumMultiset((), tol)
    sym = symmetrized_form(op.matrix, op.weights)
    scale = max(1.0, float(np.max(np.abs(sym))))
    residue = float(np.max(np.abs(sym - sym.conj().T)))
    if residue > HERMITICITY_TOL * scale:
        raise EigensolverError(f"symmetrized form is not Hermitian: residue {residue:g}")
    try:
        vals = np.linalg.eigvalsh((sym + sym.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}") from exc
    clamped = int(np.sum((vals < 0) & (vals >= -1e-9 * scale)))
    if np.any(vals < -1e-9 * scale):
        raise EigensolverError(f"negative eigenvalue {vals.min():g} in a PSD operator")
    vals = np.where(vals < 0, 0.0, vals)
    return SpectrumMultiset(tuple(float(v) for v in np.sort(vals)), tol, clamped)


@dataclass(frozen=True)
class SpectrumMultiset:
    """Sorted real eigenvalue multiset with a blended comparison tolerance.

    Two values match when ``|a - b| <= tol * max(1, |a|, |b|)``.
    """

    values: tuple = ()
    tol: float = DEFAULT_TOL
    clamped: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(float(v) for v in self.values)))

    def __len__(self):
        return len(self.values)

    def union(self, other: "SpectrumMultiset") -> "SpectrumMultiset":
        return SpectrumMultiset(self.values + other.values, max(self.tol, other.tol))


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class SpectrumComparison:
    mode: str
    holds: bool
    max_pairing_error: float
    witness: float | None
    tol: float


def compare_spectra(
    a: SpectrumMultiset,
    b: SpectrumMultiset,
    mode: str = "equal",
    c: SpectrumMultiset | None = None,
    tol: float | None = None,
) -> SpectrumComparison:
    """Compare eigenvalue multisets: ``equal``, ``subset``, or ``union``.

    ``subset`` greedily matches the sorted values of ``a`` into ``b``;
    ``union`` checks ``a`` against the merge of ``b`` and ``c``.  Failure
    is reported (with the first unmatched value as witness), never raised.
    """
    if tol is None:
        tol = max(a.tol, b.tol, c.tol if c is not None else 0.0)
    if mode == "union":
        if c is None:
            raise ValueError("union comparison needs a third multiset")
        return _equal(a, b.union(c), tol, "union")
    if mode == "equal":
        return _equal(a, b, tol, "equal")
    if mode == "subset":
        return _subset(a, b, tol)
    raise ValueError(f"unknown comparison mode {mode!r}")


def _equal(a, b, tol, mode) -> SpectrumComparison:
    worst = 0.0
    for x, y in zip(a.values, b.values):
        if not _close(x, y, tol):
            return SpectrumComparison(mode, False, abs(x - y), x, tol)
        worst = max(worst, abs(x - y))
    if len(a) != len(b):
        n = min(len(a), len(b))
        extra = a.values[n] if len(a) > n else b.values[n]
        return SpectrumComparison(mode, False, float("inf"), extra, tol)
    return SpectrumComparison(mode, True, worst, None, tol)


def _subset(a, b, tol) -> SpectrumComparison:
    worst = 0.0
    j = 0
    for x in a.values:
        while j < len(b.values) and b.values[j] < x and not _close(b.values[j], x, tol):
            j += 1
        if j >= len(b.values) or not _close(b.values[j], x, tol):
            return SpectrumComparison("subset", False, float("inf"), x, tol)
        worst = max(worst, abs(b.values[j] - x))
        j += 1
    return SpectrumComparison("subset", True, worst, None, tol)
