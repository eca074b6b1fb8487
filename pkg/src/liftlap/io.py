"""JSON file formats for complexes, voltages, signings, and coverings.

Faces are serialized as increasing vertex lists.  Permutations are
serialized as 1-based image lists of ``1..k``.  Voltage files may omit
edges, which then carry the identity; signing files list only the
flipped incidences, weighting files only the non-unit ones.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import perms
from .complexes import (
    COMBINATORIAL,
    EXPLICIT_KIND,
    NORMALIZED,
    SimplicialComplex,
    WeightScheme,
    build_complex,
)
from .covering import EdgeVoltages, IncidenceVoltages, edge_voltages
from .errors import MalformedInputError
from .operators import IncidenceSigning, IncidenceWeighting


def _load(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc}") from exc


def load_complex(path) -> tuple[SimplicialComplex, WeightScheme]:
    data = _load(path)
    if "facets" not in data:
        raise MalformedInputError(f"{path}: missing 'facets'")
    K = build_complex(data["facets"], include_empty=bool(data.get("include_empty", True)))
    scheme = parse_weight_scheme(data.get("weights"))
    return K, scheme


def parse_weight_scheme(doc) -> WeightScheme:
    if doc is None:
        return COMBINATORIAL
    kind = doc.get("scheme")
    if kind == "combinatorial":
        return COMBINATORIAL
    if kind == "normalized":
        return NORMALIZED
    if kind == "explicit":
        values = {tuple(rec["face"]): float(rec["w"]) for rec in doc.get("values", ())}
        return WeightScheme.explicit(values)
    raise MalformedInputError(f"unknown weight scheme {kind!r}")


def complex_to_dict(K: SimplicialComplex, scheme: WeightScheme = COMBINATORIAL) -> dict:
    doc = {
        "facets": [list(f) for f in K.facets()],
        "include_empty": K.include_empty,
        "weights": {"scheme": scheme.kind},
    }
    if scheme.kind == EXPLICIT_KIND:
        doc["weights"]["values"] = [
            {"face": list(f), "w": w} for f, w in scheme.values
        ]
    return doc


def save_complex(K: SimplicialComplex, path, scheme: WeightScheme = COMBINATORIAL) -> None:
    Path(path).write_text(json.dumps(complex_to_dict(K, scheme), sort_keys=True, indent=1))


def load_edge_voltages(path, M: SimplicialComplex) -> EdgeVoltages:
    """Voltages on the 1-skeleton of ``M``; absent edges get the identity."""
    data = _load(path)
    k = int(data.get("k", 1))
    table = {}
    for rec in data.get("edges", ()):
        edge = tuple(sorted(int(v) for v in rec["edge"]))
        table[edge] = perms.from_one_based(rec["perm"])
    return edge_voltages(M, k, table)


def edge_voltages_to_dict(psi: EdgeVoltages) -> dict:
    records = []
    for e in sorted(psi.perms):
        p = psi.perms[e]
        if p != perms.identity(psi.k):
            records.append({"edge": list(e), "perm": perms.to_one_based(p)})
    return {"k": psi.k, "edges": records}


def load_incidence_voltages(path, M: SimplicialComplex, dim: int) -> IncidenceVoltages:
    """Voltages on the incidences between dim- and (dim+1)-faces of ``M``."""
    data = _load(path)
    k = int(data.get("k", 1))
    given = {}
    for rec in data.get("edges", ()):
        face = tuple(sorted(int(v) for v in rec["face"]))
        cofacet = tuple(sorted(int(v) for v in rec["cofacet"]))
        given[(face, cofacet)] = perms.from_one_based(rec["perm"])
    table = {}
    for cofacet in M.faces(dim + 1):
        for j in range(len(cofacet)):
            face = cofacet[:j] + cofacet[j + 1 :]
            table[(face, cofacet)] = given.pop((face, cofacet), perms.identity(k))
    if given:
        raise MalformedInputError(f"{path}: voltages on non-incidences {sorted(given)}")
    return IncidenceVoltages(k, dim, table)


def load_signing(path) -> IncidenceSigning:
    """Signing file: listed (face, cofacet) pairs are -1, all others +1."""
    data = _load(path)
    pairs = [
        (tuple(sorted(rec["face"])), tuple(sorted(rec["cofacet"])))
        for rec in data.get("flips", ())
    ]
    return IncidenceSigning.from_pairs(pairs)


def signing_to_dict(signing: IncidenceSigning, dim_pair=None) -> dict:
    doc = {
        "flips": [
            {"face": list(f), "cofacet": list(c)} for f, c in sorted(signing.flips)
        ]
    }
    if dim_pair is not None:
        doc["dim_pair"] = list(dim_pair)
    return doc


def load_weighting(path) -> IncidenceWeighting:
    """Weighting file: listed pairs carry the given complex value, others 1."""
    data = _load(path)
    values = {}
    for rec in data.get("entries", ()):
        val = rec["value"]
        values[(tuple(sorted(rec["face"])), tuple(sorted(rec["cofacet"])))] = complex(
            float(val.get("re", 0.0)), float(val.get("im", 0.0))
        )
    return IncidenceWeighting(values)


def load_vertex_map(path) -> dict:
    data = _load(path)
    if "vertex_map" not in data:
        raise MalformedInputError(f"{path}: missing 'vertex_map'")
    return {int(a): int(b) for a, b in data["vertex_map"]}


def vertex_map_to_dict(vertex_map) -> dict:
    return {"vertex_map": [[int(a), int(b)] for a, b in sorted(vertex_map.items())]}
